#include "backbone/influence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace backbone {

HitsNonConvergence::HitsNonConvergence(double residual_, int iterations_)
    : std::runtime_error("hits did not converge: residual " + std::to_string(residual_) +
                         " after " + std::to_string(iterations_) + " iterations"),
      residual(residual_),
      iterations(iterations_) {}

HitsScores hits_scores(const DirectedGraph& g, double tol, int max_iter) {
    if (g.has_self_loops()) {
        throw std::invalid_argument("hits_scores: remove self-loops first");
    }
    const int n = g.n_nodes();
    HitsScores out;
    if (n == 0) return out;
    out.hub.assign(static_cast<size_t>(n), 0.0);
    out.authority.assign(static_cast<size_t>(n), 0.0);
    if (g.edges().empty()) return out;

    std::vector<double> hub(static_cast<size_t>(n), 1.0), auth(static_cast<size_t>(n), 0.0);
    std::vector<double> hub_new(static_cast<size_t>(n)), auth_new(static_cast<size_t>(n));
    auto normalize = [](std::vector<double>& v) {
        double norm = 0;
        for (double x : v) norm += x * x;
        norm = std::sqrt(norm);
        if (norm > 0) {
            for (double& x : v) x /= norm;
        }
        return norm;
    };

    double residual = 0;
    int iter = 0;
    for (; iter < max_iter; ++iter) {
        std::fill(auth_new.begin(), auth_new.end(), 0.0);
        for (const auto& e : g.edges()) {
            auth_new[static_cast<size_t>(e.target)] += hub[static_cast<size_t>(e.source)];
        }
        normalize(auth_new);
        std::fill(hub_new.begin(), hub_new.end(), 0.0);
        for (const auto& e : g.edges()) {
            hub_new[static_cast<size_t>(e.source)] += auth_new[static_cast<size_t>(e.target)];
        }
        normalize(hub_new);
        residual = 0;
        for (int v = 0; v < n; ++v) {
            residual = std::max(residual, std::abs(hub_new[static_cast<size_t>(v)] - hub[static_cast<size_t>(v)]));
            residual = std::max(residual, std::abs(auth_new[static_cast<size_t>(v)] - auth[static_cast<size_t>(v)]));
        }
        hub.swap(hub_new);
        auth.swap(auth_new);
        if (residual <= tol) break;
    }
    if (residual > tol) throw HitsNonConvergence(residual, iter);

    double hub_max = *std::max_element(hub.begin(), hub.end());
    double auth_max = *std::max_element(auth.begin(), auth.end());
    if (hub_max > 0) {
        for (double& x : hub) x /= hub_max;
    }
    if (auth_max > 0) {
        for (double& x : auth) x /= auth_max;
    }
    out.hub = std::move(hub);
    out.authority = std::move(auth);
    out.iterations = iter + 1;
    out.residual = residual;
    return out;
}

BotStats bot_fractions(const DirectedGraph& g, const std::vector<BotLabel>& labels) {
    const int n = g.n_nodes();
    if (labels.size() != static_cast<size_t>(n)) {
        throw std::invalid_argument("bot_fractions: labels must cover every node");
    }
    BotStats out;
    out.k_out = g.out_degrees();
    out.bot_out.assign(static_cast<size_t>(n), 0);
    for (const auto& e : g.edges()) {
        if (labels[static_cast<size_t>(e.target)] == BotLabel::bot) {
            ++out.bot_out[static_cast<size_t>(e.source)];
        }
    }
    for (int v = 0; v < n; ++v) {
        switch (labels[static_cast<size_t>(v)]) {
            case BotLabel::bot:
                ++out.bots;
                ++out.labelled;
                break;
            case BotLabel::genuine:
                ++out.labelled;
                break;
            case BotLabel::unknown:
                ++out.unknown;
                break;
        }
    }
    out.global_fraction =
        out.labelled > 0 ? static_cast<double>(out.bots) / static_cast<double>(out.labelled) : 0.0;
    out.fraction.resize(static_cast<size_t>(n));
    out.ratio.resize(static_cast<size_t>(n));
    for (int v = 0; v < n; ++v) {
        if (out.k_out[static_cast<size_t>(v)] == 0) continue;  // fraction undefined
        double f = static_cast<double>(out.bot_out[static_cast<size_t>(v)]) /
                   static_cast<double>(out.k_out[static_cast<size_t>(v)]);
        out.fraction[static_cast<size_t>(v)] = f;
        if (out.global_fraction > 0) out.ratio[static_cast<size_t>(v)] = f / out.global_fraction;
    }
    return out;
}

std::vector<std::vector<int>> bot_follower_sets(const DirectedGraph& g,
                                                const std::vector<BotLabel>& labels) {
    std::vector<std::vector<int>> sets(static_cast<size_t>(g.n_nodes()));
    for (const auto& e : g.edges()) {
        if (e.source != e.target && labels[static_cast<size_t>(e.target)] == BotLabel::bot) {
            sets[static_cast<size_t>(e.source)].push_back(e.target);
        }
    }
    for (auto& s : sets) std::sort(s.begin(), s.end());
    return sets;
}

namespace {
std::int64_t sorted_intersection_size(const std::vector<int>& a, const std::vector<int>& b) {
    std::int64_t count = 0;
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) ++i;
        else if (a[i] > b[j]) ++j;
        else {
            ++count;
            ++i;
            ++j;
        }
    }
    return count;
}
}  // namespace

OverlapMatrix overlap_matrix(const std::vector<int>& hubs,
                             const std::vector<std::vector<int>>& bot_followers) {
    OverlapMatrix out;
    out.hubs = hubs;
    const size_t k = hubs.size();
    out.matrix.assign(k, std::vector<double>(k, 0.0));
    out.empty_row.assign(k, 0);
    for (size_t i = 0; i < k; ++i) {
        const auto& bi = bot_followers[static_cast<size_t>(hubs[i])];
        if (bi.empty()) {
            out.empty_row[i] = 1;
            continue;
        }
        for (size_t j = 0; j < k; ++j) {
            const auto& bj = bot_followers[static_cast<size_t>(hubs[j])];
            out.matrix[i][j] = static_cast<double>(sorted_intersection_size(bi, bj)) /
                               static_cast<double>(bi.size());
        }
    }
    return out;
}

SquadReport detect_squads(const DirectedGraph& g, const std::vector<BotLabel>& labels,
                          int min_shared, const std::vector<double>& hub_scores) {
    if (labels.size() != static_cast<size_t>(g.n_nodes())) {
        throw std::invalid_argument("detect_squads: labels must cover every node");
    }
    if (min_shared < 1) throw std::invalid_argument("detect_squads: min_shared must be >= 1");
    SquadReport report;
    report.min_shared = min_shared;
    const int n = g.n_nodes();

    std::vector<std::vector<int>> followers = bot_follower_sets(g, labels);
    // count shared bots per pair of non-bot users through per-bot inverted lists
    std::vector<std::vector<int>> bot_to_hubs(static_cast<size_t>(n));
    for (int u = 0; u < n; ++u) {
        if (labels[static_cast<size_t>(u)] == BotLabel::bot) continue;
        for (int b : followers[static_cast<size_t>(u)]) {
            bot_to_hubs[static_cast<size_t>(b)].push_back(u);
        }
    }
    std::unordered_map<std::int64_t, int> shared;
    for (int b = 0; b < n; ++b) {
        const auto& hs = bot_to_hubs[static_cast<size_t>(b)];
        for (size_t i = 0; i < hs.size(); ++i) {
            for (size_t j = i + 1; j < hs.size(); ++j) {
                std::int64_t key =
                    (static_cast<std::int64_t>(hs[i]) << 32) | static_cast<std::uint32_t>(hs[j]);
                ++shared[key];
            }
        }
    }
    // union-find over qualifying pairs
    std::vector<int> parent(static_cast<size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int v) {
        while (parent[static_cast<size_t>(v)] != v) {
            parent[static_cast<size_t>(v)] = parent[static_cast<size_t>(parent[static_cast<size_t>(v)])];
            v = parent[static_cast<size_t>(v)];
        }
        return v;
    };
    for (auto [key, count] : shared) {
        if (count < min_shared) continue;
        int u = static_cast<int>(key >> 32);
        int w = static_cast<int>(key & 0xffffffff);
        int ru = find(u), rw = find(w);
        if (ru != rw) parent[static_cast<size_t>(std::max(ru, rw))] = std::min(ru, rw);
    }
    std::unordered_map<int, std::vector<int>> components;
    for (int u = 0; u < n; ++u) {
        if (labels[static_cast<size_t>(u)] == BotLabel::bot) continue;
        if (followers[static_cast<size_t>(u)].empty()) continue;
        components[find(u)].push_back(u);
    }

    for (auto& [root, members] : components) {
        if (members.size() < 2) continue;
        std::sort(members.begin(), members.end());
        Squad squad;
        squad.genuine_members = members;

        std::unordered_map<int, int> bot_member_count;
        std::vector<int> all_bots;
        for (int u : members) {
            for (int b : followers[static_cast<size_t>(u)]) {
                if (++bot_member_count[b] == 1) all_bots.push_back(b);
            }
        }
        std::sort(all_bots.begin(), all_bots.end());
        squad.bot_followers = all_bots;
        for (int b : all_bots) {
            if (bot_member_count[b] >= 2) squad.shared_bots.push_back(b);
        }
        if (squad.shared_bots.empty()) continue;  // members linked through no common bot

        double best = -1.0;
        for (int u : members) {
            if (hub_scores[static_cast<size_t>(u)] > best) {
                best = hub_scores[static_cast<size_t>(u)];
                squad.top_hub = u;
            }
        }

        StringIndex sub_ids;
        std::vector<int> remap(static_cast<size_t>(n), -1);
        auto add_node = [&](int v) {
            if (remap[static_cast<size_t>(v)] == -1) {
                remap[static_cast<size_t>(v)] = sub_ids.add(g.node_ids().name(v));
            }
        };
        for (int u : members) add_node(u);
        for (int b : all_bots) add_node(b);
        squad.subgraph = DirectedGraph(std::move(sub_ids));
        for (const auto& e : g.edges()) {
            int s = remap[static_cast<size_t>(e.source)];
            int t = remap[static_cast<size_t>(e.target)];
            if (s >= 0 && t >= 0) {
                GraphEdge copy = e;
                copy.source = s;
                copy.target = t;
                squad.subgraph.add_edge(copy);
            }
        }
        report.squads.push_back(std::move(squad));
    }
    std::sort(report.squads.begin(), report.squads.end(), [](const Squad& a, const Squad& b) {
        size_t an = a.genuine_members.size() + a.bot_followers.size();
        size_t bn = b.genuine_members.size() + b.bot_followers.size();
        if (an != bn) return an > bn;
        return a.genuine_members < b.genuine_members;
    });
    return report;
}

}  // namespace backbone
