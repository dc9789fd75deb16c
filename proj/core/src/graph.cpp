#include "backbone/graph.hpp"

#include <algorithm>
#include <stdexcept>

#include "backbone/csv.hpp"

namespace backbone {

int StringIndex::add(const std::string& id) {
    auto it = lookup_.find(id);
    if (it != lookup_.end()) return it->second;
    int idx = static_cast<int>(names_.size());
    names_.push_back(id);
    lookup_.emplace(id, idx);
    return idx;
}

int StringIndex::find(const std::string& id) const {
    auto it = lookup_.find(id);
    return it == lookup_.end() ? -1 : it->second;
}

BipartiteGraph BipartiteGraph::from_pairs(StringIndex left, StringIndex right,
                                          std::vector<std::pair<int, int>> pairs) {
    BipartiteGraph g;
    g.left_ = std::move(left);
    g.right_ = std::move(right);
    const int nl = g.left_.size();
    const int nr = g.right_.size();
    for (auto [i, a] : pairs) {
        if (i < 0 || i >= nl || a < 0 || a >= nr) {
            throw std::out_of_range("bipartite pair indexes an unknown node");
        }
    }
    std::sort(pairs.begin(), pairs.end());
    g.adj_left_.assign(static_cast<size_t>(nl), {});
    g.adj_right_.assign(static_cast<size_t>(nr), {});
    std::pair<int, int> prev{-1, -1};
    for (auto& p : pairs) {
        if (p == prev) {
            ++g.duplicates_;
            continue;
        }
        prev = p;
        g.adj_left_[static_cast<size_t>(p.first)].push_back(p.second);
        g.adj_right_[static_cast<size_t>(p.second)].push_back(p.first);
        ++g.m_;
    }
    return g;
}

std::vector<int> BipartiteGraph::left_degrees() const {
    std::vector<int> d(adj_left_.size());
    for (size_t i = 0; i < adj_left_.size(); ++i) d[i] = static_cast<int>(adj_left_[i].size());
    return d;
}

std::vector<int> BipartiteGraph::right_degrees() const {
    std::vector<int> d(adj_right_.size());
    for (size_t i = 0; i < adj_right_.size(); ++i) d[i] = static_cast<int>(adj_right_[i].size());
    return d;
}

DirectedBipartiteGraph DirectedBipartiteGraph::build(StringIndex users, StringIndex posts,
                                                     std::vector<std::pair<int, int>> authorship,
                                                     std::vector<std::pair<int, int>> retweets) {
    DirectedBipartiteGraph g;
    g.users_ = std::move(users);
    g.posts_ = std::move(posts);
    const int nu = g.users_.size();
    const int np = g.posts_.size();
    g.post_author_.assign(static_cast<size_t>(np), -1);
    g.authored_.assign(static_cast<size_t>(nu), {});
    g.retweeted_.assign(static_cast<size_t>(nu), {});
    g.retweeters_.assign(static_cast<size_t>(np), {});

    std::sort(authorship.begin(), authorship.end());
    authorship.erase(std::unique(authorship.begin(), authorship.end()), authorship.end());
    for (auto [u, p] : authorship) {
        if (u < 0 || u >= nu || p < 0 || p >= np) {
            throw std::out_of_range("authorship pair indexes an unknown node");
        }
        if (g.post_author_[static_cast<size_t>(p)] != -1) {
            throw std::runtime_error("post has multiple authors: " + g.posts_.name(p));
        }
        g.post_author_[static_cast<size_t>(p)] = u;
        g.authored_[static_cast<size_t>(u)].push_back(p);
    }
    for (int p = 0; p < np; ++p) {
        if (g.post_author_[static_cast<size_t>(p)] == -1) {
            throw std::runtime_error("post has no author: " + g.posts_.name(p));
        }
    }

    std::sort(retweets.begin(), retweets.end());
    retweets.erase(std::unique(retweets.begin(), retweets.end()), retweets.end());
    for (auto [u, p] : retweets) {
        if (u < 0 || u >= nu || p < 0 || p >= np) {
            throw std::out_of_range("retweet pair indexes an unknown node");
        }
        g.retweeted_[static_cast<size_t>(u)].push_back(p);
        g.retweeters_[static_cast<size_t>(p)].push_back(u);
    }
    return g;
}

DirectedDegrees DirectedBipartiteGraph::degrees() const {
    DirectedDegrees d;
    d.user_out.resize(authored_.size());
    d.user_in.resize(retweeted_.size());
    d.post_out.resize(retweeters_.size());
    d.post_in.assign(post_author_.size(), 1);
    for (size_t u = 0; u < authored_.size(); ++u) d.user_out[u] = static_cast<int>(authored_[u].size());
    for (size_t u = 0; u < retweeted_.size(); ++u) d.user_in[u] = static_cast<int>(retweeted_[u].size());
    for (size_t p = 0; p < retweeters_.size(); ++p) d.post_out[p] = static_cast<int>(retweeters_[p].size());
    return d;
}

namespace {
std::int64_t edge_key(int source, int target) {
    return (static_cast<std::int64_t>(source) << 32) | static_cast<std::uint32_t>(target);
}
}  // namespace

void DirectedGraph::add_edge(GraphEdge e) {
    if (e.source < 0 || e.source >= n_nodes() || e.target < 0 || e.target >= n_nodes()) {
        throw std::out_of_range("edge endpoint indexes an unknown node");
    }
    auto [it, inserted] = edge_lookup_.emplace(edge_key(e.source, e.target), static_cast<int>(edges_.size()));
    if (!inserted) throw std::runtime_error("duplicate edge");
    if (e.source == e.target) ++self_loops_;
    edges_.push_back(e);
}

bool DirectedGraph::has_edge(int source, int target) const {
    return edge_lookup_.count(edge_key(source, target)) > 0;
}

std::vector<int> DirectedGraph::out_degrees() const {
    std::vector<int> d(static_cast<size_t>(n_nodes()), 0);
    for (const auto& e : edges_) ++d[static_cast<size_t>(e.source)];
    return d;
}

std::vector<int> DirectedGraph::in_degrees() const {
    std::vector<int> d(static_cast<size_t>(n_nodes()), 0);
    for (const auto& e : edges_) ++d[static_cast<size_t>(e.target)];
    return d;
}

LoopRemoval remove_self_loops(const DirectedGraph& g) {
    LoopRemoval out;
    out.graph = DirectedGraph(g.node_ids());
    for (const auto& e : g.edges()) {
        if (e.source == e.target) {
            ++out.removed;
        } else {
            out.graph.add_edge(e);
        }
    }
    return out;
}

BipartiteGraph read_bipartite_csv(const std::string& path) {
    CsvTable t = read_csv(path);
    int cl = t.column("left_id");
    int cr = t.column("right_id");
    if (cl < 0 || cr < 0) {
        throw std::runtime_error(path + ": expected header left_id,right_id");
    }
    StringIndex left, right;
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(t.rows.size());
    for (const auto& row : t.rows) {
        pairs.emplace_back(left.add(row.at(static_cast<size_t>(cl))),
                           right.add(row.at(static_cast<size_t>(cr))));
    }
    return BipartiteGraph::from_pairs(std::move(left), std::move(right), std::move(pairs));
}

void write_bipartite_csv(const std::string& path, const BipartiteGraph& g) {
    CsvTable t;
    t.header = {"left_id", "right_id"};
    for (int i = 0; i < g.n_left(); ++i) {
        for (int a : g.neighbors_of_left(i)) {
            t.rows.push_back({g.left_ids().name(i), g.right_ids().name(a)});
        }
    }
    write_csv(path, t);
}

DirectedBipartiteGraph read_user_post_csv(const std::string& path) {
    CsvTable t = read_csv(path);
    int cu = t.column("user_id");
    int cp = t.column("post_id");
    int ck = t.column("kind");
    if (cu < 0 || cp < 0 || ck < 0) {
        throw std::runtime_error(path + ": expected header user_id,post_id,kind");
    }
    StringIndex users, posts;
    std::vector<std::pair<int, int>> authorship, retweets;
    for (const auto& row : t.rows) {
        int u = users.add(row.at(static_cast<size_t>(cu)));
        int p = posts.add(row.at(static_cast<size_t>(cp)));
        const std::string& kind = row.at(static_cast<size_t>(ck));
        if (kind == "T") authorship.emplace_back(u, p);
        else if (kind == "R") retweets.emplace_back(u, p);
        else throw std::runtime_error(path + ": kind must be T or R, got '" + kind + "'");
    }
    return DirectedBipartiteGraph::build(std::move(users), std::move(posts),
                                         std::move(authorship), std::move(retweets));
}

void write_user_post_csv(const std::string& path, const DirectedBipartiteGraph& g) {
    CsvTable t;
    t.header = {"user_id", "post_id", "kind"};
    for (int u = 0; u < g.n_users(); ++u) {
        for (int p : g.posts_authored_by(u)) {
            t.rows.push_back({g.user_ids().name(u), g.post_ids().name(p), "T"});
        }
    }
    for (int u = 0; u < g.n_users(); ++u) {
        for (int p : g.posts_retweeted_by(u)) {
            t.rows.push_back({g.user_ids().name(u), g.post_ids().name(p), "R"});
        }
    }
    write_csv(path, t);
}

}  // namespace backbone
