#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "backbone/graph.hpp"
#include "backbone/records.hpp"

namespace backbone {

// Lowercases ASCII plus the Latin-1 and Latin Extended-A ranges, decoding
// UTF-8 in place. Malformed bytes pass through untouched.
std::string fold_case_utf8(const std::string& text);

// Case-insensitive contiguous substring match against any keyword.
bool matches_any_keyword(const std::string& text, const std::vector<std::string>& folded_keywords);
std::vector<std::string> fold_keywords(const std::vector<std::string>& keywords);

// The hashtag-free Italian keyword list the default pipeline filters on.
const std::vector<std::string>& default_keywords();

std::vector<std::string> read_keywords_file(const std::string& path);

// Retains records whose text contains any keyword case-insensitively.
std::vector<TweetRecord> keyword_filter(const std::vector<TweetRecord>& records,
                                        const std::vector<std::string>& keywords);

struct SchemaMapping {
    // canonical field name -> dotted path in the source JSON object; identity
    // when a field is absent from the map.
    std::vector<std::pair<std::string, std::string>> entries;

    std::string path_for(const std::string& canonical) const;
    static SchemaMapping load(const std::string& json_path);
};

struct ParseDiagnostics {
    std::int64_t lines_total = 0;
    std::int64_t lines_bad_json = 0;
    std::int64_t records_missing_required = 0;
    std::vector<std::string> samples;  // first few rejected lines with the reason
};

std::vector<TweetRecord> read_jsonl_records(const std::string& path, const SchemaMapping& mapping,
                                            ParseDiagnostics* diag = nullptr);
void write_jsonl_records(const std::string& path, const std::vector<TweetRecord>& records);

struct InteractionGraphResult {
    BipartiteGraph graph;  // layer L = verified, layer Gamma = unverified
    std::int64_t skipped_unknown_verified = 0;  // interactions touching an account with no verified flag
    std::int64_t skipped_same_class = 0;        // verified-verified or unverified-unverified
};

struct UserPostResult {
    DirectedBipartiteGraph graph;
    std::int64_t stub_posts = 0;    // originals absent from the corpus, author taken from the retweet
    std::int64_t skipped_retweets = 0;  // no original and no retweeted_author_id
};

struct IngestResult {
    std::vector<AccountRecord> accounts;  // sorted by user_id
    InteractionGraphResult interaction;
    UserPostResult user_post;
    std::int64_t records_in = 0;
    std::int64_t records_kept = 0;  // after keyword filter
    std::int64_t as_of = 0;         // max timestamp across kept records
};

// The account table over author_id plus retweeted_author_id values; profiles
// come from the latest authored record of each account.
std::vector<AccountRecord> build_account_table(const std::vector<TweetRecord>& records);

InteractionGraphResult build_interaction_bipartite(const std::vector<TweetRecord>& records,
                                                   const std::vector<AccountRecord>& accounts);

UserPostResult build_user_post_bipartite(const std::vector<TweetRecord>& records);

IngestResult ingest_records(const std::vector<TweetRecord>& records,
                            const std::vector<std::string>& keywords);

// Runs the whole stage from a corpus file and persists accounts.csv,
// interaction_bipartite.csv and user_post.csv under out_dir.
IngestResult ingest_file(const std::string& corpus_jsonl, const std::vector<std::string>& keywords,
                         const std::string& out_dir, const SchemaMapping& mapping = {},
                         std::ostream* log = nullptr);

}  // namespace backbone
