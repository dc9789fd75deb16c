#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "backbone/bicm.hpp"
#include "backbone/bidcm.hpp"
#include "backbone/graph.hpp"
#include "backbone/stats.hpp"

namespace backbone {

enum class NullMode { auto_select, exact_pb, poisson };
enum class FdrCounting { nonzero, all_pairs };

struct PairStatistic {
    int a = 0;  // left index; author for directed pairs
    int b = 0;  // left index; retweeter for directed pairs
    std::int64_t observed = 0;
    double lambda = 0.0;
    double p_value = 1.0;
};

struct FdrResult {
    double alpha = 0.0;
    std::int64_t n_tests = 0;
    std::int64_t threshold_rank = 0;  // 1-based rank of the last rejected p-value, 0 when none
    double threshold_p = 0.0;
    std::vector<size_t> rejected;     // indices into the tested sequence
};

// Benjamini-Hochberg step-up: reject the i lowest p-values where i is the
// greatest 1-based rank with p_(i) <= i * alpha / n_tests. n_tests defaults to
// the sequence length; passing a larger value models untested all-one pairs.
FdrResult fdr_select(const std::vector<double>& p_values, double alpha, std::int64_t n_tests = 0);

// Diagnostic alternative, not the pipeline default.
FdrResult bonferroni_select(const std::vector<double>& p_values, double alpha,
                            std::int64_t n_tests = 0);

// Overlap counts for every unordered left-layer pair with at least one common
// right-layer neighbour; zero-overlap pairs are omitted (their p-value is 1).
std::vector<PairStatistic> observed_vmotifs_undirected(const BipartiteGraph& g);

// Expected overlap sum_a p_ia p_ja; the chung_lu fit uses the closed form
// k_i k_j sum_a(k_a^2) / m^2 with the middle sum precomputed by the caller.
double pair_lambda_undirected(const BicmFit& fit, int i, int j);

// Per-middle-node Bernoulli probabilities p_ia * p_ja feeding the exact null.
std::vector<double> pair_probs_undirected(const BicmFit& fit, int i, int j);

struct ProjectionOptions {
    double alpha = 0.01;
    NullMode null_mode = NullMode::auto_select;
    FdrCounting counting = FdrCounting::nonzero;
    bool bonferroni = false;
    int threads = 1;
};

struct ValidatedProjection {
    DirectedGraph graph;   // undirected projections store each edge once, source < target
    bool directed = false;
    NullMode mode_used = NullMode::poisson;
    std::vector<std::string> isolated;   // left-layer ids without a validated edge
    std::vector<PairStatistic> tested;   // every tested pair, canonical order
    FdrResult fdr;
    std::int64_t self_loops = 0;         // validated loops kept in graph (directed only)
};

ValidatedProjection validate_undirected(const BipartiteGraph& g, const BicmFit& fit,
                                        const ProjectionOptions& opt = {});

// Ordered pairs (author u, retweeter v) with nonzero co-occurrence; self-loops
// are validated like any pair and left in the emitted graph for the caller to
// count and strip via remove_self_loops.
ValidatedProjection validate_directed(const DirectedBipartiteGraph& g, const BidcmFit& fit,
                                      const ProjectionOptions& opt = {});

// validated.csv: source,target,observed,lambda,p_value
void write_validated_csv(const std::string& path, const ValidatedProjection& proj);
void write_isolated_csv(const std::string& path, const ValidatedProjection& proj);
DirectedGraph read_validated_csv(const std::string& path);

}  // namespace backbone
