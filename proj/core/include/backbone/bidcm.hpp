#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "backbone/degree_solver.hpp"
#include "backbone/graph.hpp"

namespace backbone {

enum class BidcmMode { lambda_only, exact };

/// Fitted Bipartite Directed Configuration Model over users x posts. The
/// authorship side is closed-form: every post has exactly one author, which
/// forces q_up = kappa_u_out / N_P for every post. The retweet side is either
/// left implicit (lambda_only) or solved like the undirected system (exact).
struct BidcmFit {
    BidcmMode mode = BidcmMode::lambda_only;
    std::vector<int> user_out;  // kappa_u_out*
    std::vector<int> user_in;   // kappa_u_in*
    std::vector<int> post_out;  // kappa_p_out*
    int n_posts = 0;
    DegreeSystemFit retweet_system;  // exact mode: users x posts over (user_in, post_out)
    double residual = 0.0;
    int iterations = 0;

    int n_users() const { return static_cast<int>(user_out.size()); }
    double authorship_probability(int user) const;            // q_up, identical across posts
    double retweet_probability(int user, int post) const;     // exact mode only
};

BidcmFit fit_bidcm(const DirectedBipartiteGraph& g, BidcmMode mode = BidcmMode::lambda_only,
                   double tol = 1e-8, int max_iter = 10000);

// Expected co-occurrence count for the ordered pair (author u, retweeter v):
// kappa_u_out* kappa_v_in* / N_P. Valid in both modes.
double directed_lambda(const BidcmFit& fit, int author, int retweeter);

void save_bidcm_json(const std::string& path, const BidcmFit& fit, const DirectedBipartiteGraph& g);
BidcmFit load_bidcm_json(const std::string& path, std::vector<std::string>* user_ids = nullptr,
                         std::vector<std::string>* post_ids = nullptr);

}  // namespace backbone
