#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "backbone/graph.hpp"

namespace backbone {

struct Partition {
    std::vector<int> assignment;  // node index -> canonical community label
    double modularity = 0.0;
    int runs = 0;
    std::uint64_t seed = 0;

    int community_count() const;
};

// Louvain restarted `runs` times, each pass visiting nodes in a freshly
// seeded random order; returns the maximum-modularity partition. Equal
// modularity breaks toward the lexicographically smallest canonical
// labelling. Directed/reciprocal inputs are symmetrized (noted on `log`).
Partition louvain_reshuffled(const DirectedGraph& g, int runs, std::uint64_t seed,
                             std::ostream* log = nullptr);

// Independent recomputation over the symmetrized graph; used to cross-check
// the optimizer's bookkeeping.
double modularity_of(const DirectedGraph& g, const std::vector<int>& assignment);

void write_partition_csv(const std::string& path, const DirectedGraph& g, const Partition& p);
std::vector<std::pair<std::string, int>> read_partition_csv(const std::string& path);

}  // namespace backbone
