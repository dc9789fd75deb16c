#include "backbone/community.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>

#include "backbone/csv.hpp"
#include "backbone/rng.hpp"

namespace backbone {

namespace {

struct WeightedGraph {
    int n = 0;
    std::vector<std::vector<std::pair<int, double>>> adj;  // no self entries
    std::vector<double> self_weight;                       // loop weight (counted twice in degree)
    std::vector<double> strength;                          // weighted degree incl. 2*self
    double two_m = 0.0;
};

WeightedGraph symmetrize(const DirectedGraph& g, std::int64_t* reciprocal_merged) {
    WeightedGraph w;
    w.n = g.n_nodes();
    w.adj.assign(static_cast<size_t>(w.n), {});
    w.self_weight.assign(static_cast<size_t>(w.n), 0.0);
    std::int64_t reciprocal = 0;
    for (const auto& e : g.edges()) {
        if (e.source == e.target) {
            w.self_weight[static_cast<size_t>(e.source)] += 1.0;
            continue;
        }
        if (g.has_edge(e.target, e.source)) ++reciprocal;
        w.adj[static_cast<size_t>(e.source)].emplace_back(e.target, 1.0);
        w.adj[static_cast<size_t>(e.target)].emplace_back(e.source, 1.0);
    }
    // merge parallel entries produced by reciprocal edges
    for (auto& nbrs : w.adj) {
        std::sort(nbrs.begin(), nbrs.end());
        size_t out = 0;
        for (size_t i = 0; i < nbrs.size();) {
            size_t j = i;
            double sum = 0;
            while (j < nbrs.size() && nbrs[j].first == nbrs[i].first) sum += nbrs[j++].second;
            nbrs[out++] = {nbrs[i].first, sum};
            i = j;
        }
        nbrs.resize(out);
    }
    w.strength.assign(static_cast<size_t>(w.n), 0.0);
    for (int v = 0; v < w.n; ++v) {
        double s = 2.0 * w.self_weight[static_cast<size_t>(v)];
        for (auto [u, wt] : w.adj[static_cast<size_t>(v)]) s += wt;
        w.strength[static_cast<size_t>(v)] = s;
        w.two_m += s;
    }
    if (reciprocal_merged) *reciprocal_merged = reciprocal / 2;
    return w;
}

double modularity_weighted(const WeightedGraph& g, const std::vector<int>& comm) {
    if (g.two_m == 0.0) return 0.0;
    int k = 0;
    for (int c : comm) k = std::max(k, c + 1);
    std::vector<double> internal(static_cast<size_t>(k), 0.0), total(static_cast<size_t>(k), 0.0);
    for (int v = 0; v < g.n; ++v) {
        int c = comm[static_cast<size_t>(v)];
        total[static_cast<size_t>(c)] += g.strength[static_cast<size_t>(v)];
        internal[static_cast<size_t>(c)] += 2.0 * g.self_weight[static_cast<size_t>(v)];
        for (auto [u, wt] : g.adj[static_cast<size_t>(v)]) {
            if (comm[static_cast<size_t>(u)] == c) internal[static_cast<size_t>(c)] += wt;
        }
    }
    double q = 0.0;
    for (int c = 0; c < k; ++c) {
        double tot = total[static_cast<size_t>(c)] / g.two_m;
        q += internal[static_cast<size_t>(c)] / g.two_m - tot * tot;
    }
    return q;
}

// one local-moving level; returns node -> community (compacted labels)
std::vector<int> louvain_level(const WeightedGraph& g, std::mt19937_64& rng, bool* moved_any) {
    std::vector<int> comm(static_cast<size_t>(g.n));
    std::iota(comm.begin(), comm.end(), 0);
    std::vector<double> comm_total = g.strength;

    std::vector<int> order(static_cast<size_t>(g.n));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<double> weight_to(static_cast<size_t>(g.n), 0.0);
    std::vector<int> touched;
    *moved_any = false;
    bool moved = true;
    while (moved) {
        moved = false;
        for (int v : order) {
            int c0 = comm[static_cast<size_t>(v)];
            touched.clear();
            for (auto [u, wt] : g.adj[static_cast<size_t>(v)]) {
                int c = comm[static_cast<size_t>(u)];
                if (weight_to[static_cast<size_t>(c)] == 0.0) touched.push_back(c);
                weight_to[static_cast<size_t>(c)] += wt;
            }
            comm_total[static_cast<size_t>(c0)] -= g.strength[static_cast<size_t>(v)];
            std::sort(touched.begin(), touched.end());
            double kv = g.strength[static_cast<size_t>(v)];
            int best = c0;
            double best_gain = weight_to[static_cast<size_t>(c0)] -
                               comm_total[static_cast<size_t>(c0)] * kv / g.two_m;
            for (int c : touched) {
                double gain = weight_to[static_cast<size_t>(c)] -
                              comm_total[static_cast<size_t>(c)] * kv / g.two_m;
                if (gain > best_gain || (gain == best_gain && c < best)) {
                    best = c;
                    best_gain = gain;
                }
            }
            comm[static_cast<size_t>(v)] = best;
            comm_total[static_cast<size_t>(best)] += kv;
            for (int c : touched) weight_to[static_cast<size_t>(c)] = 0.0;
            if (best != c0) {
                moved = true;
                *moved_any = true;
            }
        }
    }
    // compact labels in first-appearance order over node indices
    std::vector<int> relabel(static_cast<size_t>(g.n), -1);
    int next = 0;
    for (int v = 0; v < g.n; ++v) {
        int& r = relabel[static_cast<size_t>(comm[static_cast<size_t>(v)])];
        if (r == -1) r = next++;
        comm[static_cast<size_t>(v)] = r;
    }
    return comm;
}

WeightedGraph aggregate(const WeightedGraph& g, const std::vector<int>& comm) {
    int k = 0;
    for (int c : comm) k = std::max(k, c + 1);
    WeightedGraph out;
    out.n = k;
    out.adj.assign(static_cast<size_t>(k), {});
    out.self_weight.assign(static_cast<size_t>(k), 0.0);
    std::vector<std::vector<std::pair<int, double>>> buckets(static_cast<size_t>(k));
    for (int v = 0; v < g.n; ++v) {
        int cv = comm[static_cast<size_t>(v)];
        out.self_weight[static_cast<size_t>(cv)] += g.self_weight[static_cast<size_t>(v)];
        for (auto [u, wt] : g.adj[static_cast<size_t>(v)]) {
            int cu = comm[static_cast<size_t>(u)];
            if (cu == cv) {
                // each internal edge appears from both endpoints
                out.self_weight[static_cast<size_t>(cv)] += wt / 2.0;
            } else {
                buckets[static_cast<size_t>(cv)].emplace_back(cu, wt);
            }
        }
    }
    for (int c = 0; c < k; ++c) {
        auto& nbrs = buckets[static_cast<size_t>(c)];
        std::sort(nbrs.begin(), nbrs.end());
        for (size_t i = 0; i < nbrs.size();) {
            size_t j = i;
            double sum = 0;
            while (j < nbrs.size() && nbrs[j].first == nbrs[i].first) sum += nbrs[j++].second;
            out.adj[static_cast<size_t>(c)].emplace_back(nbrs[i].first, sum);
            i = j;
        }
    }
    out.strength.assign(static_cast<size_t>(k), 0.0);
    for (int c = 0; c < k; ++c) {
        double s = 2.0 * out.self_weight[static_cast<size_t>(c)];
        for (auto [u, wt] : out.adj[static_cast<size_t>(c)]) s += wt;
        out.strength[static_cast<size_t>(c)] = s;
        out.two_m += s;
    }
    return out;
}

std::vector<int> louvain_once(const WeightedGraph& base, std::mt19937_64& rng) {
    std::vector<int> assignment(static_cast<size_t>(base.n));
    std::iota(assignment.begin(), assignment.end(), 0);
    if (base.two_m == 0.0) return assignment;
    WeightedGraph g = base;
    while (true) {
        bool moved = false;
        std::vector<int> level = louvain_level(g, rng, &moved);
        for (auto& a : assignment) a = level[static_cast<size_t>(a)];
        if (!moved) break;
        WeightedGraph next = aggregate(g, level);
        if (next.n == g.n) break;
        g = std::move(next);
    }
    return assignment;
}

void canonicalize(std::vector<int>& assignment) {
    std::vector<int> relabel;
    int maxc = -1;
    for (int c : assignment) maxc = std::max(maxc, c);
    relabel.assign(static_cast<size_t>(maxc + 1), -1);
    int next = 0;
    for (int& c : assignment) {
        if (relabel[static_cast<size_t>(c)] == -1) relabel[static_cast<size_t>(c)] = next++;
        c = relabel[static_cast<size_t>(c)];
    }
}

}  // namespace

int Partition::community_count() const {
    int k = 0;
    for (int c : assignment) k = std::max(k, c + 1);
    return k;
}

Partition louvain_reshuffled(const DirectedGraph& g, int runs, std::uint64_t seed,
                             std::ostream* log) {
    if (runs < 1) throw std::invalid_argument("louvain_reshuffled: runs must be >= 1");
    Partition best;
    best.runs = runs;
    best.seed = seed;
    if (g.n_nodes() == 0) return best;

    std::int64_t reciprocal = 0;
    WeightedGraph wg = symmetrize(g, &reciprocal);
    if (reciprocal > 0 && log) {
        *log << "louvain: merged " << reciprocal << " reciprocal edge pairs (input treated as undirected)\n";
    }

    bool have = false;
    for (int r = 0; r < runs; ++r) {
        std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(r)));
        std::vector<int> assignment = louvain_once(wg, rng);
        canonicalize(assignment);
        double q = modularity_weighted(wg, assignment);
        if (!have || q > best.modularity ||
            (q == best.modularity && assignment < best.assignment)) {
            best.assignment = std::move(assignment);
            best.modularity = q;
            have = true;
        }
    }
    return best;
}

double modularity_of(const DirectedGraph& g, const std::vector<int>& assignment) {
    if (assignment.size() != static_cast<size_t>(g.n_nodes())) {
        throw std::invalid_argument("modularity_of: assignment size mismatch");
    }
    WeightedGraph wg = symmetrize(g, nullptr);
    return modularity_weighted(wg, assignment);
}

void write_partition_csv(const std::string& path, const DirectedGraph& g, const Partition& p) {
    CsvTable t;
    t.header = {"node_id", "community"};
    std::vector<std::vector<std::string>> rows;
    for (int v = 0; v < g.n_nodes(); ++v) {
        rows.push_back({g.node_ids().name(v), std::to_string(p.assignment[static_cast<size_t>(v)])});
    }
    std::sort(rows.begin(), rows.end());
    t.rows = std::move(rows);
    write_csv(path, t);
}

std::vector<std::pair<std::string, int>> read_partition_csv(const std::string& path) {
    CsvTable t = read_csv(path);
    int cn = t.column("node_id"), cc = t.column("community");
    if (cn < 0 || cc < 0) throw std::runtime_error(path + ": expected header node_id,community");
    std::vector<std::pair<std::string, int>> out;
    out.reserve(t.rows.size());
    for (const auto& row : t.rows) {
        out.emplace_back(row.at(static_cast<size_t>(cn)), std::stoi(row.at(static_cast<size_t>(cc))));
    }
    return out;
}

}  // namespace backbone
