#pragma once

#include "revsent/types.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace revsent::corpus {

struct RawReview {
    std::string review_id;
    std::string app_id;
    std::string text;
    int rating = 0;
    Timestamp posted_at{};
    std::uint64_t thumbs_up = 0;
    std::optional<std::string> app_version;

    bool operator==(const RawReview&) const = default;
};

struct CleanReview {
    RawReview raw;
    LanguageTag language = LanguageTag::Other;
    std::string normalized_text;

    bool operator==(const CleanReview&) const = default;
};

// A dump line that could not become a RawReview.
struct Reject {
    std::size_t line = 0;  // 1-based
    std::string review_id;
    std::string reason;
};

struct ParseResult {
    std::vector<RawReview> reviews;
    std::vector<Reject> rejects;
};

// Reads one JSON object per line. Blank lines are skipped. When allowed_apps
// is non-empty, other app ids are rejected. Throws IoError if the stream
// goes bad.
ParseResult parse_reviews(std::istream& in, std::span<const std::string> allowed_apps = {});
ParseResult parse_reviews_file(const std::filesystem::path& path,
                               std::span<const std::string> allowed_apps = {});

nlohmann::json to_json(const RawReview& r);
nlohmann::json to_json(const CleanReview& r);
// Inverse of to_json(CleanReview); throws ValidationError on bad records.
CleanReview clean_review_from_json(const nlohmann::json& j);

struct CorpusConfig {
    double bangla_threshold = 0.30;
    double english_threshold = 0.50;
    std::size_t noise_min_tokens = 2;
};

// Script-share heuristic: Bangla if the Bangla block holds at least
// bangla_threshold of the counted letters, else English if Latin holds at
// least english_threshold, else Other. No letters at all gives Other.
LanguageTag detect_language(std::string_view text, const CorpusConfig& config = {});

class StopWords {
public:
    StopWords() = default;
    StopWords(std::set<std::string> english, std::set<std::string> bangla);

    // Expects english.txt and bangla.txt in dir: one token per line, '#' comments.
    static StopWords load(const std::filesystem::path& dir);

    bool contains(LanguageTag language, std::string_view token) const;
    std::size_t size(LanguageTag language) const;

private:
    std::set<std::string, std::less<>> english_;
    std::set<std::string, std::less<>> bangla_;
};

// Lowercase, drop URLs and emoji, then collapse to single-space separated
// tokens. Language independent; stop words are left in.
std::string clean_surface(std::string_view text);

// clean_surface followed by stop-word removal for the given language.
// language must be English or Bangla.
std::string normalize_text(std::string_view text, LanguageTag language, const StopWords& stop_words);

struct DropEntry {
    std::string review_id;
    std::string app_id;
    std::string stage;   // "duplicate", "noise", "language", "empty"
    std::string reason;
};

nlohmann::json to_json(const DropEntry& d);

// First occurrence per (app_id, raw text, rating) wins; order is stable.
// Removed records are appended to drops when given.
std::vector<RawReview> dedupe(std::span<const RawReview> reviews, std::vector<DropEntry>* drops = nullptr);

struct AppStats {
    std::string app_id;
    std::size_t raw_count = 0;
    std::size_t deduplicated_count = 0;  // after duplicate and noise removal
    std::size_t bilingual_count = 0;     // after dropping Other-language rows
    std::size_t clean_count = 0;         // after dropping empty normalized text
    std::size_t english_count = 0;
    std::size_t bangla_count = 0;
    std::optional<double> raw_avg_rating;
    std::optional<double> avg_rating;    // over the clean rows
};

struct CorpusStats {
    std::vector<AppStats> apps;  // sorted by app_id
    AppStats total;
};

nlohmann::json to_json(const CorpusStats& stats);
std::string format_stats_table(const CorpusStats& stats);

struct CorpusBuild {
    std::vector<CleanReview> reviews;
    CorpusStats stats;
    std::vector<DropEntry> drops;
};

// duplicate -> noise -> language -> empty. Every input row ends up either
// in reviews or in drops.
CorpusBuild build_corpus(std::span<const RawReview> raws, const CorpusConfig& config,
                         const StopWords& stop_words);

}  // namespace revsent::corpus
