#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "backbone/graph.hpp"
#include "backbone/records.hpp"

namespace backbone {

class HitsNonConvergence : public std::runtime_error {
public:
    HitsNonConvergence(double residual, int iterations);
    double residual;
    int iterations;
};

struct HitsScores {
    std::vector<double> hub;        // rescaled so the maximum is 1
    std::vector<double> authority;  // likewise
    int iterations = 0;
    double residual = 0.0;
};

// Alternating power iteration with per-step Euclidean normalization and a
// final sup-norm rescale. Requires a loop-free graph (run remove_self_loops
// first); throws HitsNonConvergence when max_iter is exhausted.
HitsScores hits_scores(const DirectedGraph& g, double tol = 1e-12, int max_iter = 10000);

struct BotStats {
    std::vector<int> k_out;
    std::vector<std::int64_t> bot_out;                // |bot_i| over validated out-neighbours
    std::vector<std::optional<double>> fraction;      // |bot_i| / k_out, null when k_out = 0
    std::vector<std::optional<double>> ratio;         // fraction / global, null when undefined
    double global_fraction = 0.0;                     // |bot| / labelled validated users
    std::int64_t bots = 0;
    std::int64_t labelled = 0;
    std::int64_t unknown = 0;                         // excluded from the global count
};

// labels are indexed by graph node. Unknown labels count in k_out but neither
// in |bot_i| nor in the global fraction.
BotStats bot_fractions(const DirectedGraph& g, const std::vector<BotLabel>& labels);

struct OverlapMatrix {
    std::vector<int> hubs;                        // node indices, caller-chosen order
    std::vector<std::vector<double>> matrix;      // entry(i,j) = |bot_i ∩ bot_j| / |bot_i|
    std::vector<char> empty_row;                  // rows with |bot_i| = 0, emitted as zeros
};

OverlapMatrix overlap_matrix(const std::vector<int>& hubs,
                             const std::vector<std::vector<int>>& bot_followers);

// bot_followers[u] = sorted bots b with a validated edge u -> b.
std::vector<std::vector<int>> bot_follower_sets(const DirectedGraph& g,
                                                const std::vector<BotLabel>& labels);

struct Squad {
    std::vector<int> genuine_members;   // node indices, sorted
    std::vector<int> shared_bots;       // bots followed-by >= 2 members
    std::vector<int> bot_followers;     // union of the members' bot followers
    int top_hub = -1;                   // member with the highest hub score
    DirectedGraph subgraph;             // induced on members + bot_followers
};

struct SquadReport {
    std::vector<Squad> squads;  // largest first
    int min_shared = 0;
};

// Two non-bot users join the auxiliary graph when they share at least
// min_shared validated bot followers; connected components of size >= 2 are
// squads. Unknown-labelled accounts count as genuine members here.
SquadReport detect_squads(const DirectedGraph& g, const std::vector<BotLabel>& labels,
                          int min_shared, const std::vector<double>& hub_scores);

}  // namespace backbone
