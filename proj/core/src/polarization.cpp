#include "backbone/polarization.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "backbone/csv.hpp"

namespace backbone {

std::pair<double, int> polarization_index(const std::vector<std::int64_t>& community_counts,
                                          std::int64_t degree) {
    if (degree <= 0) throw std::invalid_argument("polarization_index: degree must be positive");
    std::int64_t best = 0;
    int arg = -1;
    bool tie = false;
    for (size_t c = 0; c < community_counts.size(); ++c) {
        if (community_counts[c] > best) {
            best = community_counts[c];
            arg = static_cast<int>(c);
            tie = false;
        } else if (community_counts[c] == best && best > 0) {
            tie = true;
        }
    }
    double rho = static_cast<double>(best) / static_cast<double>(degree);
    return {rho, tie ? -1 : arg};
}

PolarizationState assign_from_verified(const BipartiteGraph& interaction,
                                       const std::vector<std::pair<std::string, int>>& partition) {
    std::unordered_map<int, int> verified_comm;  // left index -> community
    int n_comm = 0;
    for (const auto& [id, c] : partition) {
        int v = interaction.left_ids().find(id);
        if (v >= 0) verified_comm[v] = c;
        n_comm = std::max(n_comm, c + 1);
    }
    PolarizationState state;
    std::int64_t assigned = 0;
    for (int u = 0; u < interaction.n_right(); ++u) {
        const auto& nbrs = interaction.neighbors_of_right(u);
        if (nbrs.empty()) continue;  // never enters the procedure
        std::vector<std::int64_t> counts(static_cast<size_t>(n_comm), 0);
        std::int64_t polarized_links = 0;
        for (int v : nbrs) {
            auto it = verified_comm.find(v);
            if (it != verified_comm.end()) {
                ++counts[static_cast<size_t>(it->second)];
                ++polarized_links;
            }
        }
        if (polarized_links == 0) continue;  // rho undefined without a labelled neighbour
        auto [rho, community] = polarization_index(counts, static_cast<std::int64_t>(nbrs.size()));
        PolarizationEntry e;
        e.rho = rho;
        if (rho > 0.5 && community >= 0) {
            e.community = community;
            e.round = 0;
            ++assigned;
        }
        state.entries[interaction.right_ids().name(u)] = e;
    }
    state.history.emplace_back(0, assigned);
    return state;
}

UserInteractionGraph user_interaction_graph(const DirectedBipartiteGraph& g) {
    UserInteractionGraph ig;
    for (int u = 0; u < g.n_users(); ++u) ig.users.add(g.user_ids().name(u));
    std::vector<std::unordered_set<int>> seen(static_cast<size_t>(g.n_users()));
    ig.adj.assign(static_cast<size_t>(g.n_users()), {});
    for (int p = 0; p < g.n_posts(); ++p) {
        int author = g.author_of(p);
        for (int v : g.retweeters_of(p)) {
            if (v == author) continue;
            if (seen[static_cast<size_t>(author)].insert(v).second) {
                ig.adj[static_cast<size_t>(author)].push_back(v);
                ig.adj[static_cast<size_t>(v)].push_back(author);
                seen[static_cast<size_t>(v)].insert(author);
            }
        }
    }
    for (auto& nbrs : ig.adj) std::sort(nbrs.begin(), nbrs.end());
    return ig;
}

PolarizationState contagion(const UserInteractionGraph& ig, PolarizationState state,
                            int max_rounds) {
    const int n = ig.users.size();
    std::vector<int> community(static_cast<size_t>(n), -1);
    int n_comm = 0;
    for (const auto& [id, e] : state.entries) {
        if (e.community < 0) continue;
        int u = ig.users.find(id);
        if (u >= 0) community[static_cast<size_t>(u)] = e.community;
        n_comm = std::max(n_comm, e.community + 1);
    }
    for (int round = 1; round <= max_rounds; ++round) {
        std::vector<std::pair<int, PolarizationEntry>> adopted;
        for (int u = 0; u < n; ++u) {
            if (community[static_cast<size_t>(u)] >= 0) continue;
            const auto& nbrs = ig.adj[static_cast<size_t>(u)];
            if (nbrs.empty()) continue;
            std::vector<std::int64_t> counts(static_cast<size_t>(n_comm), 0);
            std::int64_t polarized = 0;
            for (int w : nbrs) {
                int c = community[static_cast<size_t>(w)];
                if (c >= 0) {
                    ++counts[static_cast<size_t>(c)];
                    ++polarized;
                }
            }
            if (polarized == 0) continue;
            auto [rho, comm] = polarization_index(counts, static_cast<std::int64_t>(nbrs.size()));
            if (rho > 0.5 && comm >= 0) {
                PolarizationEntry e;
                e.rho = rho;
                e.community = comm;
                e.round = round;
                adopted.emplace_back(u, e);
            }
        }
        state.history.emplace_back(round, static_cast<std::int64_t>(adopted.size()));
        if (adopted.empty()) break;
        for (const auto& [u, e] : adopted) {
            community[static_cast<size_t>(u)] = e.community;
            state.entries[ig.users.name(u)] = e;
        }
    }
    // record the final rho of users that saw polarized neighbours but never crossed 0.5
    for (int u = 0; u < n; ++u) {
        if (community[static_cast<size_t>(u)] >= 0) continue;
        const auto& nbrs = ig.adj[static_cast<size_t>(u)];
        if (nbrs.empty()) continue;
        std::vector<std::int64_t> counts(static_cast<size_t>(n_comm), 0);
        std::int64_t polarized = 0;
        for (int w : nbrs) {
            int c = community[static_cast<size_t>(w)];
            if (c >= 0) {
                ++counts[static_cast<size_t>(c)];
                ++polarized;
            }
        }
        if (polarized == 0) continue;
        auto [rho, comm] = polarization_index(counts, static_cast<std::int64_t>(nbrs.size()));
        (void)comm;
        std::string id = ig.users.name(u);
        auto it = state.entries.find(id);
        if (it == state.entries.end()) {
            PolarizationEntry e;
            e.rho = rho;
            state.entries[id] = e;
        }
    }
    return state;
}

void write_polarization_csv(const std::string& path, const PolarizationState& state) {
    CsvTable t;
    t.header = {"user_id", "rho", "community", "round_assigned"};
    for (const auto& [id, e] : state.entries) {
        char rho[32];
        std::snprintf(rho, sizeof(rho), "%.6f", e.rho);
        t.rows.push_back({id, rho,
                          e.community >= 0 ? std::to_string(e.community) : "unpolarized",
                          e.round >= 0 ? std::to_string(e.round) : ""});
    }
    write_csv(path, t);
}

PolarizationState read_polarization_csv(const std::string& path) {
    CsvTable t = read_csv(path);
    int ci = t.column("user_id"), cr = t.column("rho"), cc = t.column("community"),
        cro = t.column("round_assigned");
    if (ci < 0 || cr < 0 || cc < 0 || cro < 0) {
        throw std::runtime_error(path + ": expected header user_id,rho,community,round_assigned");
    }
    PolarizationState state;
    for (const auto& row : t.rows) {
        PolarizationEntry e;
        e.rho = std::stod(row.at(static_cast<size_t>(cr)));
        const std::string& comm = row.at(static_cast<size_t>(cc));
        if (comm != "unpolarized") e.community = std::stoi(comm);
        const std::string& round = row.at(static_cast<size_t>(cro));
        if (!round.empty()) e.round = std::stoi(round);
        state.entries[row.at(static_cast<size_t>(ci))] = e;
    }
    return state;
}

}  // namespace backbone
