#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace backbone {

/// Bidirectional mapping between opaque string identifiers and dense indices.
/// All algorithms run on indices; reports translate back through this.
class StringIndex {
public:
    int add(const std::string& id);            // returns existing index if known
    int find(const std::string& id) const;     // -1 if absent
    const std::string& name(int index) const { return names_.at(static_cast<size_t>(index)); }
    int size() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& names() const { return names_; }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, int> lookup_;
};

/// Binary undirected bipartite network held as per-node sorted adjacency over
/// dense indices. Immutable once built.
class BipartiteGraph {
public:
    static BipartiteGraph from_pairs(StringIndex left, StringIndex right,
                                     std::vector<std::pair<int, int>> pairs);

    const StringIndex& left_ids() const { return left_; }
    const StringIndex& right_ids() const { return right_; }
    int n_left() const { return left_.size(); }
    int n_right() const { return right_.size(); }
    std::int64_t edge_count() const { return m_; }
    std::int64_t duplicate_pairs() const { return duplicates_; }  // collapsed multiplicity, diagnostics only

    const std::vector<int>& neighbors_of_left(int i) const { return adj_left_[static_cast<size_t>(i)]; }
    const std::vector<int>& neighbors_of_right(int a) const { return adj_right_[static_cast<size_t>(a)]; }

    std::vector<int> left_degrees() const;
    std::vector<int> right_degrees() const;

private:
    StringIndex left_;
    StringIndex right_;
    std::vector<std::vector<int>> adj_left_;   // left index -> sorted right indices
    std::vector<std::vector<int>> adj_right_;  // right index -> sorted left indices
    std::int64_t m_ = 0;
    std::int64_t duplicates_ = 0;
};

struct DirectedDegrees {
    std::vector<int> user_out;  // posts authored
    std::vector<int> user_in;   // posts retweeted
    std::vector<int> post_out;  // retweeters of the post
    std::vector<int> post_in;   // authors of the post (must be 1 everywhere)
};

/// Users x posts network with separate authorship (T) and retweet (R) layers.
/// Every post carries exactly one authorship link.
class DirectedBipartiteGraph {
public:
    // `authorship` holds (user,post) pairs, `retweets` likewise. Throws when a
    // post has zero or multiple authors; the message names the offending post.
    static DirectedBipartiteGraph build(StringIndex users, StringIndex posts,
                                        std::vector<std::pair<int, int>> authorship,
                                        std::vector<std::pair<int, int>> retweets);

    const StringIndex& user_ids() const { return users_; }
    const StringIndex& post_ids() const { return posts_; }
    int n_users() const { return users_.size(); }
    int n_posts() const { return posts_.size(); }

    int author_of(int post) const { return post_author_[static_cast<size_t>(post)]; }
    const std::vector<int>& posts_authored_by(int user) const { return authored_[static_cast<size_t>(user)]; }
    const std::vector<int>& posts_retweeted_by(int user) const { return retweeted_[static_cast<size_t>(user)]; }
    const std::vector<int>& retweeters_of(int post) const { return retweeters_[static_cast<size_t>(post)]; }

    DirectedDegrees degrees() const;

private:
    StringIndex users_;
    StringIndex posts_;
    std::vector<int> post_author_;
    std::vector<std::vector<int>> authored_;
    std::vector<std::vector<int>> retweeted_;
    std::vector<std::vector<int>> retweeters_;
};

/// Monopartite graph container used for projections and their analytics.
/// Edges may carry the validation annotations (observed count, null mean,
/// p-value); plain graphs leave them at their defaults.
struct GraphEdge {
    int source = 0;
    int target = 0;
    std::int64_t observed = 0;
    double lambda = 0.0;
    double p_value = 1.0;
};

class DirectedGraph {
public:
    DirectedGraph() = default;
    explicit DirectedGraph(StringIndex nodes) : nodes_(std::move(nodes)) {}

    const StringIndex& node_ids() const { return nodes_; }
    int n_nodes() const { return nodes_.size(); }
    const std::vector<GraphEdge>& edges() const { return edges_; }

    // Rejects duplicate (source,target) pairs. Self-loops are allowed and
    // tracked by has_self_loops().
    void add_edge(GraphEdge e);
    bool has_edge(int source, int target) const;
    bool has_self_loops() const { return self_loops_ > 0; }
    std::int64_t self_loop_count() const { return self_loops_; }

    std::vector<int> out_degrees() const;
    std::vector<int> in_degrees() const;

private:
    StringIndex nodes_;
    std::vector<GraphEdge> edges_;
    std::unordered_map<std::int64_t, int> edge_lookup_;
    std::int64_t self_loops_ = 0;
};

struct LoopRemoval {
    DirectedGraph graph;
    std::int64_t removed = 0;
};

// Drops (v,v) edges, preserving annotations on the survivors. Idempotent.
LoopRemoval remove_self_loops(const DirectedGraph& g);

// ---- edge-list file formats ----
// Bipartite: header `left_id,right_id`. Directed bipartite: header
// `user_id,post_id,kind` with kind in {T,R}.
BipartiteGraph read_bipartite_csv(const std::string& path);
void write_bipartite_csv(const std::string& path, const BipartiteGraph& g);
DirectedBipartiteGraph read_user_post_csv(const std::string& path);
void write_user_post_csv(const std::string& path, const DirectedBipartiteGraph& g);

}  // namespace backbone
