#include "revsent/corpus.hpp"

#include "revsent/error.hpp"
#include "revsent/io.hpp"
#include "revsent/text.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <tuple>
#include <unordered_set>

namespace revsent::corpus {

using nlohmann::json;

namespace {

std::string id_of(const json& j) {
    if (j.is_object()) {
        auto it = j.find("review_id");
        if (it != j.end() && it->is_string()) return it->get<std::string>();
    }
    return {};
}

// Returns an empty string on success, otherwise the reject reason.
std::string parse_record(const json& j, RawReview& out) {
    if (!j.is_object()) return "record is not an object";
    auto str_field = [&](const char* name, std::string& dst) -> std::string {
        auto it = j.find(name);
        if (it == j.end()) return std::string("missing field ") + name;
        if (!it->is_string()) return std::string("field ") + name + " is not a string";
        dst = it->get<std::string>();
        return {};
    };
    if (auto err = str_field("review_id", out.review_id); !err.empty()) return err;
    if (out.review_id.empty()) return "empty review_id";
    if (auto err = str_field("app_id", out.app_id); !err.empty()) return err;
    if (out.app_id.empty()) return "empty app_id";
    if (auto err = str_field("text", out.text); !err.empty()) return err;

    auto rating = j.find("rating");
    if (rating == j.end()) return "missing field rating";
    if (!rating->is_number_integer()) return "rating is not an integer";
    const auto r = rating->get<std::int64_t>();
    if (r < 1 || r > 5) return "rating out of range";
    out.rating = static_cast<int>(r);

    std::string posted;
    if (auto err = str_field("posted_at", posted); !err.empty()) return err;
    auto ts = parse_rfc3339(posted);
    if (!ts) return "posted_at is not an RFC 3339 timestamp";
    out.posted_at = *ts;

    auto thumbs = j.find("thumbs_up");
    if (thumbs == j.end()) return "missing field thumbs_up";
    if (!thumbs->is_number_integer()) return "thumbs_up is not an integer";
    if (thumbs->is_number_unsigned()) {
        out.thumbs_up = thumbs->get<std::uint64_t>();
    } else {
        const auto t = thumbs->get<std::int64_t>();
        if (t < 0) return "thumbs_up is negative";
        out.thumbs_up = static_cast<std::uint64_t>(t);
    }

    out.app_version.reset();
    if (auto v = j.find("app_version"); v != j.end() && !v->is_null()) {
        if (!v->is_string()) return "app_version is not a string";
        out.app_version = v->get<std::string>();
    }
    return {};
}

}  // namespace

ParseResult parse_reviews(std::istream& in, std::span<const std::string> allowed_apps) {
    ParseResult result;
    std::unordered_set<std::string> seen_ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (io::trim(line).empty()) continue;

        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            result.rejects.push_back({line_no, {}, "malformed JSON"});
            continue;
        }
        RawReview review;
        if (auto reason = parse_record(j, review); !reason.empty()) {
            result.rejects.push_back({line_no, id_of(j), reason});
            continue;
        }
        if (!allowed_apps.empty() &&
            std::find(allowed_apps.begin(), allowed_apps.end(), review.app_id) == allowed_apps.end()) {
            result.rejects.push_back({line_no, review.review_id, "unknown app_id"});
            continue;
        }
        if (!seen_ids.insert(review.review_id).second) {
            result.rejects.push_back({line_no, review.review_id, "duplicate review_id"});
            continue;
        }
        result.reviews.push_back(std::move(review));
    }
    if (in.bad()) throw IoError("review stream became unreadable");
    return result;
}

ParseResult parse_reviews_file(const std::filesystem::path& path, std::span<const std::string> allowed_apps) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open review dump " + path.string());
    return parse_reviews(in, allowed_apps);
}

json to_json(const RawReview& r) {
    json j;
    j["review_id"] = r.review_id;
    j["app_id"] = r.app_id;
    j["text"] = r.text;
    j["rating"] = r.rating;
    j["posted_at"] = format_rfc3339(r.posted_at);
    j["thumbs_up"] = r.thumbs_up;
    j["app_version"] = r.app_version ? json(*r.app_version) : json(nullptr);
    return j;
}

json to_json(const CleanReview& r) {
    json j = to_json(r.raw);
    j["language"] = std::string(to_string(r.language));
    j["normalized_text"] = r.normalized_text;
    return j;
}

CleanReview clean_review_from_json(const json& j) {
    CleanReview out;
    if (auto reason = parse_record(j, out.raw); !reason.empty()) {
        throw ValidationError("corpus record " + id_of(j) + ": " + reason);
    }
    auto lang = j.contains("language") && j["language"].is_string()
                    ? parse_language(j["language"].get<std::string>())
                    : std::nullopt;
    if (!lang || *lang == LanguageTag::Other) {
        throw ValidationError("corpus record " + out.raw.review_id + ": bad language");
    }
    out.language = *lang;
    if (!j.contains("normalized_text") || !j["normalized_text"].is_string()) {
        throw ValidationError("corpus record " + out.raw.review_id + ": missing normalized_text");
    }
    out.normalized_text = j["normalized_text"].get<std::string>();
    if (out.normalized_text.empty()) {
        throw ValidationError("corpus record " + out.raw.review_id + ": empty normalized_text");
    }
    return out;
}

LanguageTag detect_language(std::string_view text, const CorpusConfig& config) {
    std::size_t bangla = 0;
    std::size_t latin = 0;
    for (char32_t cp : text::decode_utf8(text)) {
        if (text::is_bangla_block(cp)) {
            ++bangla;
        } else if (text::is_latin_letter(cp)) {
            ++latin;
        }
    }
    const std::size_t total = bangla + latin;
    if (total == 0) return LanguageTag::Other;
    const double t = static_cast<double>(total);
    if (static_cast<double>(bangla) / t >= config.bangla_threshold) return LanguageTag::Bangla;
    if (static_cast<double>(latin) / t >= config.english_threshold) return LanguageTag::English;
    return LanguageTag::Other;
}

namespace {

std::set<std::string, std::less<>> load_list(const std::filesystem::path& path) {
    std::set<std::string, std::less<>> words;
    for (const auto& line : io::read_lines(path)) {
        const std::string word = io::trim(line);
        if (word.empty() || word[0] == '#') continue;
        words.insert(text::encode_utf8(text::to_lower(text::decode_utf8(word))));
    }
    return words;
}

}  // namespace

StopWords::StopWords(std::set<std::string> english, std::set<std::string> bangla)
    : english_(english.begin(), english.end()), bangla_(bangla.begin(), bangla.end()) {}

StopWords StopWords::load(const std::filesystem::path& dir) {
    StopWords sw;
    sw.english_ = load_list(dir / "english.txt");
    sw.bangla_ = load_list(dir / "bangla.txt");
    return sw;
}

bool StopWords::contains(LanguageTag language, std::string_view token) const {
    switch (language) {
        case LanguageTag::English: return english_.find(token) != english_.end();
        case LanguageTag::Bangla: return bangla_.find(token) != bangla_.end();
        case LanguageTag::Other: return false;
    }
    return false;
}

std::size_t StopWords::size(LanguageTag language) const {
    switch (language) {
        case LanguageTag::English: return english_.size();
        case LanguageTag::Bangla: return bangla_.size();
        case LanguageTag::Other: return 0;
    }
    return 0;
}

namespace {

bool is_scheme_char(char32_t cp) {
    return (cp >= 'a' && cp <= 'z') || (cp >= '0' && cp <= '9') || cp == '+' || cp == '.' || cp == '-';
}

bool is_word_char(char32_t cp) {
    return text::is_token_letter(cp) || (cp >= '0' && cp <= '9');
}

// Replaces each URL (scheme://... or www.... up to the next whitespace) with
// a single space. Input must already be lowercase.
std::u32string remove_urls(const std::u32string& s) {
    std::u32string out;
    out.reserve(s.size());
    std::size_t i = 0;
    const std::size_t n = s.size();
    while (i < n) {
        std::size_t url_start = n;
        if (s.compare(i, 3, U"://") == 0) {
            // walk back over the scheme already copied into out
            std::size_t k = out.size();
            while (k > 0 && is_scheme_char(out[k - 1])) --k;
            while (k < out.size() && !(out[k] >= 'a' && out[k] <= 'z')) ++k;  // scheme starts with a letter
            if (k < out.size() && (k == 0 || !is_word_char(out[k - 1]))) {
                out.resize(k);
                url_start = i;
            }
        } else if (s.compare(i, 4, U"www.") == 0 && (i == 0 || !is_word_char(s[i - 1]))) {
            url_start = i;
        }
        if (url_start != n) {
            std::size_t j = url_start;
            while (j < n && !text::is_whitespace(s[j])) ++j;
            out.push_back(U' ');
            i = j;
            continue;
        }
        out.push_back(s[i]);
        ++i;
    }
    return out;
}

std::vector<std::string> surface_tokens(std::string_view raw) {
    std::u32string s = text::to_lower(text::decode_utf8(raw));
    s = remove_urls(s);
    std::u32string stripped;
    stripped.reserve(s.size());
    for (char32_t cp : s) {
        if (text::is_emoji_joiner(cp)) continue;
        stripped.push_back(text::is_emoji(cp) ? U' ' : cp);
    }
    return text::split_tokens(text::encode_utf8(stripped));
}

}  // namespace

std::string clean_surface(std::string_view text) {
    return text::join(surface_tokens(text), " ");
}

std::string normalize_text(std::string_view raw, LanguageTag language, const StopWords& stop_words) {
    require(language != LanguageTag::Other, "normalize_text: language must be English or Bangla");
    std::vector<std::string> kept;
    for (auto& tok : surface_tokens(raw)) {
        if (!stop_words.contains(language, tok)) kept.push_back(std::move(tok));
    }
    return text::join(kept, " ");
}

json to_json(const DropEntry& d) {
    return json{{"review_id", d.review_id}, {"app_id", d.app_id}, {"stage", d.stage}, {"reason", d.reason}};
}

std::vector<RawReview> dedupe(std::span<const RawReview> reviews, std::vector<DropEntry>* drops) {
    using Key = std::tuple<std::string_view, std::string_view, int>;
    std::map<Key, std::string_view> first_seen;
    std::vector<RawReview> kept;
    kept.reserve(reviews.size());
    for (const auto& r : reviews) {
        auto [it, inserted] = first_seen.emplace(Key{r.app_id, r.text, r.rating}, r.review_id);
        if (inserted) {
            kept.push_back(r);
        } else if (drops) {
            drops->push_back({r.review_id, r.app_id, "duplicate", "duplicate of " + std::string(it->second)});
        }
    }
    return kept;
}

namespace {

struct StatsAccumulator {
    AppStats stats;
    double raw_rating_sum = 0.0;
    double clean_rating_sum = 0.0;
};

void finish(StatsAccumulator& acc) {
    if (acc.stats.raw_count > 0) {
        acc.stats.raw_avg_rating = acc.raw_rating_sum / static_cast<double>(acc.stats.raw_count);
    }
    if (acc.stats.clean_count > 0) {
        acc.stats.avg_rating = acc.clean_rating_sum / static_cast<double>(acc.stats.clean_count);
    }
}

}  // namespace

CorpusBuild build_corpus(std::span<const RawReview> raws, const CorpusConfig& config,
                         const StopWords& stop_words) {
    CorpusBuild build;
    std::map<std::string, StatsAccumulator> per_app;
    StatsAccumulator total;
    total.stats.app_id = "TOTAL";
    auto app = [&](const std::string& id) -> StatsAccumulator& {
        auto& acc = per_app[id];
        acc.stats.app_id = id;
        return acc;
    };

    for (const auto& r : raws) {
        auto& acc = app(r.app_id);
        ++acc.stats.raw_count;
        acc.raw_rating_sum += r.rating;
        ++total.stats.raw_count;
        total.raw_rating_sum += r.rating;
    }

    const std::vector<RawReview> unique = dedupe(raws, &build.drops);

    for (const auto& r : unique) {
        const auto tokens = surface_tokens(r.text);
        if (tokens.size() < config.noise_min_tokens) {
            build.drops.push_back({r.review_id, r.app_id, "noise",
                                   "fewer than " + std::to_string(config.noise_min_tokens) + " tokens"});
            continue;
        }
        auto& acc = app(r.app_id);
        ++acc.stats.deduplicated_count;
        ++total.stats.deduplicated_count;

        const LanguageTag lang = detect_language(r.text, config);
        if (lang == LanguageTag::Other) {
            build.drops.push_back({r.review_id, r.app_id, "language", "not English or Bangla"});
            continue;
        }
        ++acc.stats.bilingual_count;
        ++total.stats.bilingual_count;

        std::string normalized = normalize_text(r.text, lang, stop_words);
        if (normalized.empty()) {
            build.drops.push_back({r.review_id, r.app_id, "empty", "empty after normalization"});
            continue;
        }
        for (StatsAccumulator* a : {&acc, &total}) {
            ++a->stats.clean_count;
            a->clean_rating_sum += r.rating;
            ++(lang == LanguageTag::English ? a->stats.english_count : a->stats.bangla_count);
        }
        build.reviews.push_back({r, lang, std::move(normalized)});
    }

    for (auto& [id, acc] : per_app) {
        finish(acc);
        build.stats.apps.push_back(acc.stats);
    }
    finish(total);
    build.stats.total = total.stats;
    return build;
}

namespace {

json stats_row(const AppStats& s) {
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    return json{{"app_id", s.app_id},
                {"raw_count", s.raw_count},
                {"deduplicated_count", s.deduplicated_count},
                {"bilingual_count", s.bilingual_count},
                {"clean_count", s.clean_count},
                {"english_count", s.english_count},
                {"bangla_count", s.bangla_count},
                {"raw_avg_rating", opt(s.raw_avg_rating)},
                {"avg_rating", opt(s.avg_rating)}};
}

}  // namespace

json to_json(const CorpusStats& stats) {
    json apps = json::array();
    for (const auto& a : stats.apps) apps.push_back(stats_row(a));
    return json{{"apps", apps}, {"total", stats_row(stats.total)}};
}

std::string format_stats_table(const CorpusStats& stats) {
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof line, "%-20s %8s %8s %10s %8s %8s %8s %11s\n", "App", "Raw", "Dedup",
                  "Bilingual", "Clean", "English", "Bangla", "Avg.Rating");
    out << line;
    auto row = [&](const AppStats& s) {
        std::snprintf(line, sizeof line, "%-20s %8zu %8zu %10zu %8zu %8zu %8zu %11s\n", s.app_id.c_str(),
                      s.raw_count, s.deduplicated_count, s.bilingual_count, s.clean_count, s.english_count,
                      s.bangla_count, s.avg_rating ? io::fixed(*s.avg_rating, 2).c_str() : "-");
        out << line;
    };
    for (const auto& a : stats.apps) row(a);
    out << std::string(90, '-') << '\n';
    row(stats.total);
    return out.str();
}

}  // namespace revsent::corpus
