#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace backbone {

struct ProfileFields {
    std::int64_t friends_count = 0;
    std::int64_t followers_count = 0;
    std::int64_t tweets_count = 0;
    std::int64_t account_created_at = 0;  // UTC seconds
    bool has_name = false;
    bool has_image = false;
    bool has_address = false;
    bool has_biography = false;
    bool has_url = false;
    bool in_a_list = false;
    bool verified = false;
};

struct TweetRecord {
    std::string tweet_id;
    std::string author_id;
    std::string text;
    std::optional<std::string> retweeted_tweet_id;
    std::optional<std::string> retweeted_author_id;
    std::int64_t timestamp = 0;  // UTC seconds
    std::optional<ProfileFields> author_profile;

    bool is_retweet() const { return retweeted_tweet_id.has_value(); }
};

enum class BotLabel { genuine, bot, unknown };

const char* to_string(BotLabel label);
BotLabel bot_label_from_string(const std::string& s);

struct AccountRecord {
    std::string user_id;
    std::optional<ProfileFields> profile;   // absent for accounts only seen as retweet targets
    std::optional<bool> verified;
    BotLabel bot = BotLabel::unknown;
    std::optional<int> community;
    std::optional<double> polarization;     // in [0,1] when present
    std::int64_t last_seen = 0;             // max record timestamp for this account
};

// accounts.csv: one row per account, sorted by user_id. The `verified` cell is
// 1/0 or empty when the flag was never observed.
void write_accounts_csv(const std::string& path, const std::vector<AccountRecord>& accounts);
std::vector<AccountRecord> read_accounts_csv(const std::string& path);

// bots.csv: user_id,label with label in {bot,genuine,unknown}.
void write_bots_csv(const std::string& path, const std::vector<AccountRecord>& accounts);
void apply_bots_csv(const std::string& path, std::vector<AccountRecord>& accounts);

}  // namespace backbone
