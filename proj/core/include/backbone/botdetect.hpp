#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "backbone/records.hpp"

namespace backbone {

/// Per-account profile features feeding the decision-tree classifier.
struct FeatureVector {
    double friends = 0;
    double followers = 0;
    double tweets = 0;
    double friends_over_followers_sq = 0;  // +inf when followers=0 and friends>0
    double account_age_days = 0;
    double following_rate = 0;             // friends / age, age floored at one day
    bool has_name = false;
    bool has_image = false;
    bool has_address = false;
    bool has_bio = false;
    bool has_url = false;
    bool in_list = false;
    bool rule_2f_ge_fr = false;    // 2*followers >= friends
    bool rule_100fr_ge_f = false;  // 100*friends >= followers
    bool rule_50fr_ge_f = false;   // 50*friends >= followers

    double value(const std::string& feature) const;  // throws on unknown name
    static const std::vector<std::string>& feature_names();
};

FeatureVector extract_features(const ProfileFields& profile, std::int64_t as_of);

/// Binary decision tree over FeatureVector fields. Internal nodes route
/// `value <= threshold` to the left child.
class TreeModel {
public:
    struct Node {
        bool leaf = false;
        BotLabel label = BotLabel::genuine;  // leaves only
        std::string feature;                 // internal only
        double threshold = 0;
        int left = -1;
        int right = -1;
    };

    // Validates structure: known features, in-range children, acyclic, all
    // paths ending at a leaf. Throws on any violation.
    static TreeModel from_nodes(std::vector<Node> nodes);
    static TreeModel load_json(const std::string& path);
    void save_json(const std::string& path) const;

    // The hand-built fallback used when no trained model file is supplied.
    static TreeModel default_heuristic();

    const std::vector<Node>& nodes() const { return nodes_; }

private:
    std::vector<Node> nodes_;
};

BotLabel classify(const FeatureVector& fv, const TreeModel& model);

struct ClassificationSummary {
    std::int64_t bots = 0;
    std::int64_t genuine = 0;
    std::int64_t unknown = 0;  // accounts without profile fields
};

// Labels every account in place; accounts lacking a profile become `unknown`.
// as_of defaults to the table's max last_seen when <= 0.
ClassificationSummary classify_accounts(std::vector<AccountRecord>& accounts, const TreeModel& model,
                                        std::int64_t as_of = 0);

}  // namespace backbone
