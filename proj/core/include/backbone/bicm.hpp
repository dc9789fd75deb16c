#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "backbone/degree_solver.hpp"
#include "backbone/graph.hpp"

namespace backbone {

enum class BicmMode { exact, chung_lu };

/// Fitted Bipartite Configuration Model. In exact mode the link probability is
/// x_i y_a / (1 + x_i y_a) with the fitnesses solved from the likelihood
/// system; in chung_lu mode it is the closed form k_i k_a / m, clamped to 1.
struct BicmFit {
    BicmMode mode = BicmMode::exact;
    DegreeSystemFit system;              // exact mode
    std::vector<int> left_degrees;       // k_i*
    std::vector<int> right_degrees;      // k_a*
    std::int64_t m = 0;
    double residual = 0.0;
    int iterations = 0;
    std::int64_t clamped_pairs = 0;      // chung_lu pairs with k_i k_a > m

    int n_left() const { return static_cast<int>(left_degrees.size()); }
    int n_right() const { return static_cast<int>(right_degrees.size()); }
    double link_probability(int i, int a) const;
    double sum_right_degree_sq() const;  // sum over a of (k_a*)^2
};

// Solves the likelihood system to `tol` (max relative expected-degree error).
// Throws FitNonConvergence when max_iter is exhausted.
BicmFit fit_bicm(const BipartiteGraph& g, double tol = 1e-8, int max_iter = 10000);

// Chung-Lu closed-form approximation; valid in the sparse regime.
BicmFit fit_chung_lu(const BipartiteGraph& g);

BicmFit fit_bicm_mode(const BipartiteGraph& g, BicmMode mode, double tol = 1e-8,
                      int max_iter = 10000);

void save_bicm_json(const std::string& path, const BicmFit& fit, const BipartiteGraph& g);
BicmFit load_bicm_json(const std::string& path, std::vector<std::string>* left_ids = nullptr,
                       std::vector<std::string>* right_ids = nullptr);

}  // namespace backbone
