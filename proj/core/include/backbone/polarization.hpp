#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "backbone/graph.hpp"

namespace backbone {

struct PolarizationEntry {
    double rho = 0.0;
    int community = -1;  // -1 = unpolarized ("gray")
    int round = -1;      // 0 = assigned from the verified stage, n >= 1 = contagion round
};

struct PolarizationState {
    std::map<std::string, PolarizationEntry> entries;          // users that entered the procedure
    std::vector<std::pair<int, std::int64_t>> history;         // (round, newly polarized)
};

// rho = max_c count_c / degree and the arg max community; a tie yields
// community -1. Throws when degree is zero.
std::pair<double, int> polarization_index(const std::vector<std::int64_t>& community_counts,
                                          std::int64_t degree);

// Stage one: every unverified user with at least one interaction receives rho
// over its verified neighbours' communities and adopts the majority community
// when rho > 0.5. Verified nodes missing from the partition count in the
// degree but toward no community.
PolarizationState assign_from_verified(const BipartiteGraph& interaction,
                                       const std::vector<std::pair<std::string, int>>& partition);

// Undirected user-user interaction graph: author and retweeter of each post
// are linked; self-pairs are dropped.
struct UserInteractionGraph {
    StringIndex users;
    std::vector<std::vector<int>> adj;
};
UserInteractionGraph user_interaction_graph(const DirectedBipartiteGraph& g);

// Synchronous majority contagion: an unpolarized user adopts a community when
// the polarized neighbours of one community exceed half of ALL its
// neighbours; iterates until a round assigns nobody or max_rounds is hit.
PolarizationState contagion(const UserInteractionGraph& ig, PolarizationState initial,
                            int max_rounds);

// polarization.csv: user_id,rho,community,round_assigned
void write_polarization_csv(const std::string& path, const PolarizationState& state);
PolarizationState read_polarization_csv(const std::string& path);

}  // namespace backbone
