#include "backbone/botdetect.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace backbone {

const std::vector<std::string>& FeatureVector::feature_names() {
    static const std::vector<std::string> names = {
        "friends",       "followers",      "tweets",        "friends_over_followers_sq",
        "account_age_days", "following_rate", "has_name",   "has_image",
        "has_address",   "has_bio",        "has_url",       "in_list",
        "rule_2f_ge_fr", "rule_100fr_ge_f", "rule_50fr_ge_f"};
    return names;
}

double FeatureVector::value(const std::string& feature) const {
    if (feature == "friends") return friends;
    if (feature == "followers") return followers;
    if (feature == "tweets") return tweets;
    if (feature == "friends_over_followers_sq") return friends_over_followers_sq;
    if (feature == "account_age_days") return account_age_days;
    if (feature == "following_rate") return following_rate;
    if (feature == "has_name") return has_name ? 1.0 : 0.0;
    if (feature == "has_image") return has_image ? 1.0 : 0.0;
    if (feature == "has_address") return has_address ? 1.0 : 0.0;
    if (feature == "has_bio") return has_bio ? 1.0 : 0.0;
    if (feature == "has_url") return has_url ? 1.0 : 0.0;
    if (feature == "in_list") return in_list ? 1.0 : 0.0;
    if (feature == "rule_2f_ge_fr") return rule_2f_ge_fr ? 1.0 : 0.0;
    if (feature == "rule_100fr_ge_f") return rule_100fr_ge_f ? 1.0 : 0.0;
    if (feature == "rule_50fr_ge_f") return rule_50fr_ge_f ? 1.0 : 0.0;
    throw std::runtime_error("unknown feature: '" + feature + "'");
}

FeatureVector extract_features(const ProfileFields& p, std::int64_t as_of) {
    FeatureVector fv;
    fv.friends = static_cast<double>(p.friends_count);
    fv.followers = static_cast<double>(p.followers_count);
    fv.tweets = static_cast<double>(p.tweets_count);
    if (p.followers_count == 0) {
        fv.friends_over_followers_sq =
            p.friends_count == 0 ? 0.0 : std::numeric_limits<double>::infinity();
    } else {
        double f = static_cast<double>(p.followers_count);
        fv.friends_over_followers_sq = static_cast<double>(p.friends_count) / (f * f);
    }
    double age_days = static_cast<double>(as_of - p.account_created_at) / 86400.0;
    fv.account_age_days = std::max(0.0, age_days);
    fv.following_rate = fv.friends / std::max(1.0, fv.account_age_days);
    fv.has_name = p.has_name;
    fv.has_image = p.has_image;
    fv.has_address = p.has_address;
    fv.has_bio = p.has_biography;
    fv.has_url = p.has_url;
    fv.in_list = p.in_a_list;
    fv.rule_2f_ge_fr = 2 * p.followers_count >= p.friends_count;
    fv.rule_100fr_ge_f = 100 * p.friends_count >= p.followers_count;
    fv.rule_50fr_ge_f = 50 * p.friends_count >= p.followers_count;
    return fv;
}

TreeModel TreeModel::from_nodes(std::vector<Node> nodes) {
    if (nodes.empty()) throw std::runtime_error("tree model has no nodes");
    const int n = static_cast<int>(nodes.size());
    FeatureVector probe;
    for (const auto& node : nodes) {
        if (node.leaf) continue;
        probe.value(node.feature);  // rejects unknown feature names
        if (node.left < 0 || node.left >= n || node.right < 0 || node.right >= n) {
            throw std::runtime_error("tree node child out of range");
        }
    }
    // every path from the root must terminate at a leaf
    std::vector<int> state(nodes.size(), 0);  // 0 unvisited, 1 on stack, 2 done
    std::vector<int> stack = {0};
    while (!stack.empty()) {
        int v = stack.back();
        if (state[static_cast<size_t>(v)] == 0) {
            state[static_cast<size_t>(v)] = 1;
            if (!nodes[static_cast<size_t>(v)].leaf) {
                for (int c : {nodes[static_cast<size_t>(v)].left, nodes[static_cast<size_t>(v)].right}) {
                    if (state[static_cast<size_t>(c)] == 1) {
                        throw std::runtime_error("tree model contains a cycle");
                    }
                    if (state[static_cast<size_t>(c)] == 0) stack.push_back(c);
                }
            }
        } else {
            state[static_cast<size_t>(v)] = 2;
            stack.pop_back();
        }
    }
    TreeModel m;
    m.nodes_ = std::move(nodes);
    return m;
}

TreeModel TreeModel::load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open tree model: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    if (!j.contains("nodes") || !j["nodes"].is_array()) {
        throw std::runtime_error(path + ": tree model must contain a nodes array");
    }
    std::vector<Node> nodes;
    for (const auto& nj : j["nodes"]) {
        Node node;
        if (nj.contains("leaf")) {
            node.leaf = true;
            node.label = bot_label_from_string(nj["leaf"].get<std::string>());
            if (node.label == BotLabel::unknown) {
                throw std::runtime_error(path + ": leaf label must be bot or genuine");
            }
        } else {
            node.feature = nj.at("feature").get<std::string>();
            node.threshold = nj.at("threshold").get<double>();
            node.left = nj.at("left").get<int>();
            node.right = nj.at("right").get<int>();
        }
        nodes.push_back(std::move(node));
    }
    return from_nodes(std::move(nodes));
}

void TreeModel::save_json(const std::string& path) const {
    nlohmann::ordered_json j;
    j["nodes"] = nlohmann::ordered_json::array();
    for (const auto& node : nodes_) {
        nlohmann::ordered_json nj;
        if (node.leaf) {
            nj["leaf"] = to_string(node.label);
        } else {
            nj["feature"] = node.feature;
            nj["threshold"] = node.threshold;
            nj["left"] = node.left;
            nj["right"] = node.right;
        }
        j["nodes"].push_back(nj);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write tree model: " + path);
    out << j.dump(2) << '\n';
}

TreeModel TreeModel::default_heuristic() {
    auto internal = [](const char* f, double thr, int l, int r) {
        Node n;
        n.feature = f;
        n.threshold = thr;
        n.left = l;
        n.right = r;
        return n;
    };
    auto leaf = [](BotLabel lbl) {
        Node n;
        n.leaf = true;
        n.label = lbl;
        return n;
    };
    // Accounts following far more than they are followed, with a bare profile
    // or an extreme following rate, land on bot leaves.
    std::vector<Node> nodes;
    nodes.push_back(internal("rule_2f_ge_fr", 0.5, 1, 5));   // 0
    nodes.push_back(internal("has_image", 0.5, 2, 3));       // 1
    nodes.push_back(leaf(BotLabel::bot));                    // 2
    nodes.push_back(internal("has_bio", 0.5, 2, 4));         // 3
    nodes.push_back(internal("following_rate", 100.0, 6, 2)); // 4
    nodes.push_back(internal("tweets", 0.5, 7, 6));          // 5
    nodes.push_back(leaf(BotLabel::genuine));                // 6
    nodes.push_back(internal("in_list", 0.5, 2, 6));         // 7
    return from_nodes(std::move(nodes));
}

BotLabel classify(const FeatureVector& fv, const TreeModel& model) {
    const auto& nodes = model.nodes();
    int cur = 0;
    while (!nodes[static_cast<size_t>(cur)].leaf) {
        const auto& n = nodes[static_cast<size_t>(cur)];
        cur = fv.value(n.feature) <= n.threshold ? n.left : n.right;
    }
    return nodes[static_cast<size_t>(cur)].label;
}

ClassificationSummary classify_accounts(std::vector<AccountRecord>& accounts, const TreeModel& model,
                                        std::int64_t as_of) {
    if (as_of <= 0) {
        for (const auto& a : accounts) as_of = std::max(as_of, a.last_seen);
    }
    ClassificationSummary summary;
    for (auto& a : accounts) {
        if (!a.profile) {
            a.bot = BotLabel::unknown;
            ++summary.unknown;
            continue;
        }
        a.bot = classify(extract_features(*a.profile, as_of), model);
        if (a.bot == BotLabel::bot) ++summary.bots;
        else ++summary.genuine;
    }
    return summary;
}

}  // namespace backbone
