#include "backbone/ingest.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace backbone {

using nlohmann::json;

namespace {

void append_utf8(std::string& out, unsigned cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

unsigned fold_codepoint(unsigned cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 32;
    if ((cp >= 0xC0 && cp <= 0xD6) || (cp >= 0xD8 && cp <= 0xDE)) return cp + 32;
    if (cp >= 0x100 && cp <= 0x137 && (cp % 2) == 0 && cp != 0x130) return cp + 1;
    if (cp >= 0x139 && cp <= 0x147 && (cp % 2) == 1) return cp + 1;
    if (cp >= 0x14A && cp <= 0x177 && (cp % 2) == 0) return cp + 1;
    if (cp == 0x178) return 0xFF;
    if (cp >= 0x179 && cp <= 0x17D && (cp % 2) == 1) return cp + 1;
    return cp;
}

}  // namespace

std::string fold_case_utf8(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    size_t i = 0;
    const size_t n = text.size();
    while (i < n) {
        unsigned char b0 = static_cast<unsigned char>(text[i]);
        unsigned cp = 0;
        size_t len = 1;
        bool valid = true;
        if (b0 < 0x80) {
            cp = b0;
        } else if ((b0 >> 5) == 0x6 && i + 1 < n) {
            cp = (b0 & 0x1F) << 6 | (static_cast<unsigned char>(text[i + 1]) & 0x3F);
            len = 2;
            valid = (static_cast<unsigned char>(text[i + 1]) >> 6) == 0x2;
        } else if ((b0 >> 4) == 0xE && i + 2 < n) {
            cp = (b0 & 0x0F) << 12 | (static_cast<unsigned char>(text[i + 1]) & 0x3F) << 6 |
                 (static_cast<unsigned char>(text[i + 2]) & 0x3F);
            len = 3;
            valid = (static_cast<unsigned char>(text[i + 1]) >> 6) == 0x2 &&
                    (static_cast<unsigned char>(text[i + 2]) >> 6) == 0x2;
        } else if ((b0 >> 3) == 0x1E && i + 3 < n) {
            cp = (b0 & 0x07) << 18 | (static_cast<unsigned char>(text[i + 1]) & 0x3F) << 12 |
                 (static_cast<unsigned char>(text[i + 2]) & 0x3F) << 6 |
                 (static_cast<unsigned char>(text[i + 3]) & 0x3F);
            len = 4;
            valid = (static_cast<unsigned char>(text[i + 1]) >> 6) == 0x2 &&
                    (static_cast<unsigned char>(text[i + 2]) >> 6) == 0x2 &&
                    (static_cast<unsigned char>(text[i + 3]) >> 6) == 0x2;
        } else {
            valid = false;
        }
        if (!valid) {
            out.push_back(text[i]);
            ++i;
            continue;
        }
        append_utf8(out, fold_codepoint(cp));
        i += len;
    }
    return out;
}

std::vector<std::string> fold_keywords(const std::vector<std::string>& keywords) {
    std::vector<std::string> out;
    out.reserve(keywords.size());
    for (const auto& k : keywords) out.push_back(fold_case_utf8(k));
    return out;
}

bool matches_any_keyword(const std::string& text, const std::vector<std::string>& folded_keywords) {
    std::string folded = fold_case_utf8(text);
    for (const auto& k : folded_keywords) {
        if (!k.empty() && folded.find(k) != std::string::npos) return true;
    }
    return false;
}

const std::vector<std::string>& default_keywords() {
    static const std::vector<std::string> kw = {
        "immigrati", "migranti",    "ong",        "scafisti", "seawatch",
        "barconi",   "clandestini", "guardia costiera libica", "naufragio", "sbarco"};
    return kw;
}

std::vector<std::string> read_keywords_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open keywords file: " + path);
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.pop_back();
        size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        line = line.substr(start);
        if (line.empty() || line[0] == '#') continue;
        out.push_back(line);
    }
    return out;
}

std::vector<TweetRecord> keyword_filter(const std::vector<TweetRecord>& records,
                                        const std::vector<std::string>& keywords) {
    if (keywords.empty()) throw std::invalid_argument("keyword_filter: keyword list is empty");
    std::vector<std::string> folded = fold_keywords(keywords);
    std::vector<TweetRecord> out;
    out.reserve(records.size());
    for (const auto& r : records) {
        if (matches_any_keyword(r.text, folded)) out.push_back(r);
    }
    return out;
}

std::string SchemaMapping::path_for(const std::string& canonical) const {
    for (const auto& [key, value] : entries) {
        if (key == canonical) return value;
    }
    return canonical;
}

SchemaMapping SchemaMapping::load(const std::string& json_path) {
    std::ifstream in(json_path);
    if (!in) throw std::runtime_error("cannot open schema mapping: " + json_path);
    json j = json::parse(in);
    SchemaMapping m;
    for (auto it = j.begin(); it != j.end(); ++it) {
        m.entries.emplace_back(it.key(), it.value().get<std::string>());
    }
    return m;
}

namespace {

const json* lookup_path(const json& root, const std::string& dotted) {
    const json* cur = &root;
    size_t pos = 0;
    while (pos < dotted.size()) {
        size_t dot = dotted.find('.', pos);
        std::string key = dotted.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
        if (!cur->is_object()) return nullptr;
        auto it = cur->find(key);
        if (it == cur->end() || it->is_null()) return nullptr;
        cur = &*it;
        if (dot == std::string::npos) break;
        pos = dot + 1;
    }
    return cur;
}

std::optional<std::string> get_string(const json& root, const std::string& path) {
    const json* v = lookup_path(root, path);
    if (!v) return std::nullopt;
    if (v->is_string()) return v->get<std::string>();
    if (v->is_number_integer()) return std::to_string(v->get<std::int64_t>());
    return std::nullopt;
}

std::optional<std::int64_t> get_int(const json& root, const std::string& path) {
    const json* v = lookup_path(root, path);
    if (!v) return std::nullopt;
    if (v->is_number()) return static_cast<std::int64_t>(v->get<double>());
    if (v->is_string()) {
        try {
            return std::stoll(v->get<std::string>());
        } catch (...) {
            return std::nullopt;
        }
    }
    return std::nullopt;
}

bool get_bool(const json& root, const std::string& path, bool fallback) {
    const json* v = lookup_path(root, path);
    if (!v) return fallback;
    if (v->is_boolean()) return v->get<bool>();
    if (v->is_number()) return v->get<double>() != 0.0;
    return fallback;
}

}  // namespace

std::vector<TweetRecord> read_jsonl_records(const std::string& path, const SchemaMapping& mapping,
                                            ParseDiagnostics* diag) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open corpus file: " + path);
    std::vector<TweetRecord> out;
    std::string line;
    ParseDiagnostics local;
    ParseDiagnostics& d = diag ? *diag : local;
    auto reject = [&](const std::string& why) {
        ++d.records_missing_required;
        if (d.samples.size() < 5) d.samples.push_back(why);
    };
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++d.lines_total;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            ++d.lines_bad_json;
            continue;
        }
        TweetRecord r;
        auto tid = get_string(j, mapping.path_for("tweet_id"));
        auto aid = get_string(j, mapping.path_for("author_id"));
        auto ts = get_int(j, mapping.path_for("timestamp"));
        if (!tid || tid->empty() || !aid || aid->empty() || !ts) {
            reject("line " + std::to_string(d.lines_total) + ": missing tweet_id/author_id/timestamp");
            continue;
        }
        r.tweet_id = *tid;
        r.author_id = *aid;
        r.timestamp = *ts;
        r.text = get_string(j, mapping.path_for("text")).value_or("");
        auto rtid = get_string(j, mapping.path_for("retweeted_tweet_id"));
        auto raid = get_string(j, mapping.path_for("retweeted_author_id"));
        if (rtid.has_value() != raid.has_value()) {
            reject("line " + std::to_string(d.lines_total) +
                   ": retweeted_tweet_id and retweeted_author_id must appear together");
            continue;
        }
        r.retweeted_tweet_id = rtid;
        r.retweeted_author_id = raid;
        const std::string ppath = mapping.path_for("author_profile");
        if (lookup_path(j, ppath)) {
            ProfileFields p;
            p.friends_count = std::max<std::int64_t>(0, get_int(j, ppath + ".friends_count").value_or(0));
            p.followers_count = std::max<std::int64_t>(0, get_int(j, ppath + ".followers_count").value_or(0));
            p.tweets_count = std::max<std::int64_t>(0, get_int(j, ppath + ".tweets_count").value_or(0));
            p.account_created_at = get_int(j, ppath + ".account_created_at").value_or(0);
            p.has_name = get_bool(j, ppath + ".has_name", false);
            p.has_image = get_bool(j, ppath + ".has_image", false);
            p.has_address = get_bool(j, ppath + ".has_address", false);
            p.has_biography = get_bool(j, ppath + ".has_biography", false);
            p.has_url = get_bool(j, ppath + ".has_url", false);
            p.in_a_list = get_bool(j, ppath + ".in_a_list", false);
            p.verified = get_bool(j, ppath + ".verified", false);
            r.author_profile = p;
        }
        out.push_back(std::move(r));
    }
    return out;
}

void write_jsonl_records(const std::string& path, const std::vector<TweetRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write corpus file: " + path);
    for (const auto& r : records) {
        nlohmann::ordered_json j;
        j["tweet_id"] = r.tweet_id;
        j["author_id"] = r.author_id;
        j["text"] = r.text;
        if (r.retweeted_tweet_id) j["retweeted_tweet_id"] = *r.retweeted_tweet_id;
        if (r.retweeted_author_id) j["retweeted_author_id"] = *r.retweeted_author_id;
        j["timestamp"] = r.timestamp;
        if (r.author_profile) {
            const ProfileFields& p = *r.author_profile;
            nlohmann::ordered_json pj;
            pj["friends_count"] = p.friends_count;
            pj["followers_count"] = p.followers_count;
            pj["tweets_count"] = p.tweets_count;
            pj["account_created_at"] = p.account_created_at;
            pj["has_name"] = p.has_name;
            pj["has_image"] = p.has_image;
            pj["has_address"] = p.has_address;
            pj["has_biography"] = p.has_biography;
            pj["has_url"] = p.has_url;
            pj["in_a_list"] = p.in_a_list;
            pj["verified"] = p.verified;
            j["author_profile"] = pj;
        }
        out << j.dump() << '\n';
    }
}

std::vector<AccountRecord> build_account_table(const std::vector<TweetRecord>& records) {
    struct Slot {
        AccountRecord rec;
        std::int64_t profile_ts = -1;
        std::string profile_tid;
    };
    std::unordered_map<std::string, Slot> table;
    auto touch = [&](const std::string& id) -> Slot& {
        auto [it, inserted] = table.try_emplace(id);
        if (inserted) it->second.rec.user_id = id;
        return it->second;
    };
    for (const auto& r : records) {
        Slot& author = touch(r.author_id);
        author.rec.last_seen = std::max(author.rec.last_seen, r.timestamp);
        if (r.author_profile) {
            // the freshest authored record wins; ties break on tweet_id
            if (r.timestamp > author.profile_ts ||
                (r.timestamp == author.profile_ts && r.tweet_id > author.profile_tid)) {
                author.profile_ts = r.timestamp;
                author.profile_tid = r.tweet_id;
                author.rec.profile = r.author_profile;
                author.rec.verified = r.author_profile->verified;
            }
        }
        if (r.retweeted_author_id) {
            Slot& target = touch(*r.retweeted_author_id);
            target.rec.last_seen = std::max(target.rec.last_seen, r.timestamp);
        }
    }
    std::vector<AccountRecord> out;
    out.reserve(table.size());
    for (auto& [id, slot] : table) out.push_back(std::move(slot.rec));
    std::sort(out.begin(), out.end(),
              [](const AccountRecord& a, const AccountRecord& b) { return a.user_id < b.user_id; });
    return out;
}

InteractionGraphResult build_interaction_bipartite(const std::vector<TweetRecord>& records,
                                                   const std::vector<AccountRecord>& accounts) {
    std::unordered_map<std::string, std::optional<bool>> verified;
    for (const auto& a : accounts) verified[a.user_id] = a.verified;

    StringIndex left, right;
    for (const auto& a : accounts) {  // accounts arrive sorted; keeps node order canonical
        if (!a.verified.has_value()) continue;
        if (*a.verified) left.add(a.user_id);
        else right.add(a.user_id);
    }

    InteractionGraphResult out{BipartiteGraph{}, 0, 0};
    std::vector<std::pair<int, int>> pairs;
    for (const auto& r : records) {
        if (!r.retweeted_author_id) continue;  // a lone tweet links nobody
        auto va = verified.find(r.author_id);
        auto vb = verified.find(*r.retweeted_author_id);
        if (va == verified.end() || vb == verified.end() || !va->second.has_value() ||
            !vb->second.has_value()) {
            ++out.skipped_unknown_verified;
            continue;
        }
        bool author_verified = *va->second;
        bool target_verified = *vb->second;
        if (author_verified == target_verified) {
            ++out.skipped_same_class;
            continue;
        }
        const std::string& v_id = author_verified ? r.author_id : *r.retweeted_author_id;
        const std::string& u_id = author_verified ? *r.retweeted_author_id : r.author_id;
        pairs.emplace_back(left.find(v_id), right.find(u_id));
    }
    out.graph = BipartiteGraph::from_pairs(std::move(left), std::move(right), std::move(pairs));
    return out;
}

UserPostResult build_user_post_bipartite(const std::vector<TweetRecord>& records) {
    StringIndex users, posts;
    std::vector<std::pair<int, int>> authorship, retweets;
    std::unordered_set<int> has_author;
    UserPostResult out{DirectedBipartiteGraph{}, 0, 0};

    for (const auto& r : records) {
        if (r.is_retweet()) continue;
        int u = users.add(r.author_id);
        int p = posts.add(r.tweet_id);
        if (has_author.insert(p).second) authorship.emplace_back(u, p);
    }
    for (const auto& r : records) {
        if (!r.is_retweet()) continue;
        int p = posts.find(*r.retweeted_tweet_id);
        if (p < 0 || !has_author.count(p)) {
            if (!r.retweeted_author_id || r.retweeted_author_id->empty()) {
                ++out.skipped_retweets;
                continue;
            }
            int stub_author = users.add(*r.retweeted_author_id);
            p = posts.add(*r.retweeted_tweet_id);
            has_author.insert(p);
            authorship.emplace_back(stub_author, p);
            ++out.stub_posts;
        }
        retweets.emplace_back(users.add(r.author_id), p);
    }
    out.graph = DirectedBipartiteGraph::build(std::move(users), std::move(posts),
                                              std::move(authorship), std::move(retweets));
    return out;
}

IngestResult ingest_records(const std::vector<TweetRecord>& records,
                            const std::vector<std::string>& keywords) {
    IngestResult result;
    result.records_in = static_cast<std::int64_t>(records.size());
    std::vector<TweetRecord> kept = keyword_filter(records, keywords);
    result.records_kept = static_cast<std::int64_t>(kept.size());
    for (const auto& r : kept) result.as_of = std::max(result.as_of, r.timestamp);
    result.accounts = build_account_table(kept);
    result.interaction = build_interaction_bipartite(kept, result.accounts);
    result.user_post = build_user_post_bipartite(kept);
    return result;
}

IngestResult ingest_file(const std::string& corpus_jsonl, const std::vector<std::string>& keywords,
                         const std::string& out_dir, const SchemaMapping& mapping,
                         std::ostream* log) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    ParseDiagnostics diag;
    std::vector<TweetRecord> records = read_jsonl_records(corpus_jsonl, mapping, &diag);
    IngestResult result = ingest_records(records, keywords);
    write_accounts_csv((fs::path(out_dir) / "accounts.csv").string(), result.accounts);
    write_bipartite_csv((fs::path(out_dir) / "interaction_bipartite.csv").string(),
                        result.interaction.graph);
    write_user_post_csv((fs::path(out_dir) / "user_post.csv").string(), result.user_post.graph);
    if (log) {
        *log << "ingest: " << diag.lines_total << " lines, " << diag.lines_bad_json
             << " bad json, " << diag.records_missing_required << " rejected records\n"
             << "ingest: kept " << result.records_kept << "/" << result.records_in
             << " after keyword filter, " << result.accounts.size() << " accounts\n"
             << "ingest: interaction graph " << result.interaction.graph.n_left() << "x"
             << result.interaction.graph.n_right() << ", " << result.interaction.graph.edge_count()
             << " edges (" << result.interaction.skipped_unknown_verified
             << " skipped for unknown verified flag, " << result.interaction.skipped_same_class
             << " same-class)\n"
             << "ingest: user-post graph " << result.user_post.graph.n_users() << " users x "
             << result.user_post.graph.n_posts() << " posts, " << result.user_post.stub_posts
             << " stub posts, " << result.user_post.skipped_retweets << " skipped retweets\n";
        for (const auto& s : diag.samples) *log << "ingest: rejected " << s << "\n";
    }
    return result;
}

}  // namespace backbone
