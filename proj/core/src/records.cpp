#include "backbone/records.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "backbone/csv.hpp"

namespace backbone {

const char* to_string(BotLabel label) {
    switch (label) {
        case BotLabel::genuine: return "genuine";
        case BotLabel::bot: return "bot";
        case BotLabel::unknown: return "unknown";
    }
    return "unknown";
}

BotLabel bot_label_from_string(const std::string& s) {
    if (s == "genuine") return BotLabel::genuine;
    if (s == "bot") return BotLabel::bot;
    if (s == "unknown") return BotLabel::unknown;
    throw std::runtime_error("unknown bot label: '" + s + "'");
}

namespace {
std::string opt_bool_cell(const std::optional<bool>& v) {
    if (!v) return "";
    return *v ? "1" : "0";
}
}  // namespace

void write_accounts_csv(const std::string& path, const std::vector<AccountRecord>& accounts) {
    std::vector<const AccountRecord*> sorted;
    sorted.reserve(accounts.size());
    for (const auto& a : accounts) sorted.push_back(&a);
    std::sort(sorted.begin(), sorted.end(),
              [](const AccountRecord* a, const AccountRecord* b) { return a->user_id < b->user_id; });

    CsvTable t;
    t.header = {"user_id",       "verified",     "has_profile",  "friends_count",
                "followers_count", "tweets_count", "account_created_at", "has_name",
                "has_image",     "has_address",  "has_biography", "has_url",
                "in_a_list",     "last_seen"};
    for (const AccountRecord* a : sorted) {
        std::vector<std::string> row;
        row.push_back(a->user_id);
        row.push_back(opt_bool_cell(a->verified));
        row.push_back(a->profile ? "1" : "0");
        if (a->profile) {
            const ProfileFields& p = *a->profile;
            row.push_back(std::to_string(p.friends_count));
            row.push_back(std::to_string(p.followers_count));
            row.push_back(std::to_string(p.tweets_count));
            row.push_back(std::to_string(p.account_created_at));
            row.push_back(p.has_name ? "1" : "0");
            row.push_back(p.has_image ? "1" : "0");
            row.push_back(p.has_address ? "1" : "0");
            row.push_back(p.has_biography ? "1" : "0");
            row.push_back(p.has_url ? "1" : "0");
            row.push_back(p.in_a_list ? "1" : "0");
        } else {
            for (int i = 0; i < 10; ++i) row.push_back("");
        }
        row.push_back(std::to_string(a->last_seen));
        t.rows.push_back(std::move(row));
    }
    write_csv(path, t);
}

std::vector<AccountRecord> read_accounts_csv(const std::string& path) {
    CsvTable t = read_csv(path);
    auto col = [&](const char* name) {
        int c = t.column(name);
        if (c < 0) throw std::runtime_error(path + ": missing column " + name);
        return static_cast<size_t>(c);
    };
    size_t c_id = col("user_id"), c_ver = col("verified"), c_hp = col("has_profile");
    size_t c_fr = col("friends_count"), c_fo = col("followers_count"), c_tw = col("tweets_count");
    size_t c_cr = col("account_created_at"), c_nm = col("has_name"), c_im = col("has_image");
    size_t c_ad = col("has_address"), c_bio = col("has_biography"), c_url = col("has_url");
    size_t c_ls = col("in_a_list"), c_seen = col("last_seen");

    std::vector<AccountRecord> out;
    out.reserve(t.rows.size());
    for (const auto& row : t.rows) {
        AccountRecord a;
        a.user_id = row.at(c_id);
        const std::string& v = row.at(c_ver);
        if (v == "1") a.verified = true;
        else if (v == "0") a.verified = false;
        if (row.at(c_hp) == "1") {
            ProfileFields p;
            p.friends_count = std::stoll(row.at(c_fr));
            p.followers_count = std::stoll(row.at(c_fo));
            p.tweets_count = std::stoll(row.at(c_tw));
            p.account_created_at = std::stoll(row.at(c_cr));
            p.has_name = row.at(c_nm) == "1";
            p.has_image = row.at(c_im) == "1";
            p.has_address = row.at(c_ad) == "1";
            p.has_biography = row.at(c_bio) == "1";
            p.has_url = row.at(c_url) == "1";
            p.in_a_list = row.at(c_ls) == "1";
            p.verified = a.verified.value_or(false);
            a.profile = p;
        }
        a.last_seen = std::stoll(row.at(c_seen));
        out.push_back(std::move(a));
    }
    return out;
}

void write_bots_csv(const std::string& path, const std::vector<AccountRecord>& accounts) {
    std::vector<const AccountRecord*> sorted;
    sorted.reserve(accounts.size());
    for (const auto& a : accounts) sorted.push_back(&a);
    std::sort(sorted.begin(), sorted.end(),
              [](const AccountRecord* a, const AccountRecord* b) { return a->user_id < b->user_id; });
    CsvTable t;
    t.header = {"user_id", "label"};
    for (const AccountRecord* a : sorted) {
        t.rows.push_back({a->user_id, to_string(a->bot)});
    }
    write_csv(path, t);
}

void apply_bots_csv(const std::string& path, std::vector<AccountRecord>& accounts) {
    CsvTable t = read_csv(path);
    int c_id = t.column("user_id");
    int c_label = t.column("label");
    if (c_id < 0 || c_label < 0) throw std::runtime_error(path + ": expected header user_id,label");
    std::unordered_map<std::string, BotLabel> labels;
    for (const auto& row : t.rows) {
        labels[row.at(static_cast<size_t>(c_id))] =
            bot_label_from_string(row.at(static_cast<size_t>(c_label)));
    }
    for (auto& a : accounts) {
        auto it = labels.find(a.user_id);
        if (it != labels.end()) a.bot = it->second;
    }
}

}  // namespace backbone
