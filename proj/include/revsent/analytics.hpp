#pragma once

#include "revsent/corpus.hpp"
#include "revsent/types.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace revsent::analytics {

struct ScoredReview {
    std::string app_id;
    SentimentLabel label = SentimentLabel::Neutral;
    std::uint64_t thumbs_up = 0;
    int rating = 0;
};

// Shares are percentages; all three are empty when total_weight is zero.
struct AppSentimentProfile {
    std::string app_id;
    std::optional<double> pss;
    std::optional<double> nss;
    std::optional<double> neutral_share;
    double avg_rating = 0.0;  // unweighted, over the reviews scored here
    std::uint64_t total_weight = 0;
    std::size_t n_reviews = 0;
    bool degenerate = false;
};

// ThumbsUp-weighted positive/negative shares for a single app. Reviews with
// zero thumbs carry zero weight. Throws ContractViolation on an empty set or
// mixed app ids.
AppSentimentProfile weighted_scores(std::span<const ScoredReview> reviews);

// One profile per app id, in app id order.
std::vector<AppSentimentProfile> profiles_by_app(std::span<const ScoredReview> reviews);

// PSS descending (ties by app id); apps without a PSS go last, by average
// rating descending and then app id.
std::vector<AppSentimentProfile> rank_apps(std::vector<AppSentimentProfile> profiles);

class AspectLexicon {
public:
    AspectLexicon() = default;

    // Reads <dir>/<language>/<aspect slug>.txt for english/bangla; missing
    // files are skipped. Entries are lowercased.
    static AspectLexicon load(const std::filesystem::path& dir);

    void add(Aspect aspect, std::string_view cue);
    const std::set<std::string, std::less<>>& cues(Aspect aspect) const {
        return cues_[static_cast<std::size_t>(aspect)];
    }

private:
    std::array<std::set<std::string, std::less<>>, kNumAspects> cues_;
};

// Aspects (in enum order) whose cue set meets the review's normalized tokens.
std::vector<Aspect> detect_aspect_cues(const corpus::CleanReview& review, const AspectLexicon& lexicon);

struct ReviewRef {
    std::string app_id;
    std::uint64_t thumbs_up = 0;
};

using ReviewIndex = std::map<std::string, ReviewRef, std::less<>>;

struct AspectRow {
    std::string app_id;
    Aspect aspect = Aspect::UiUx;
    std::size_t mentions = 0;
    std::array<std::size_t, kNumClasses> counts{};
    std::array<double, kNumClasses> shares{};  // percent of mentions
    std::uint64_t salience = 0;                // summed thumbs_up of mentioning reviews
    double mean_confidence = 0.0;
};

struct AspectReject {
    std::string review_id;
    std::string aspect;
    std::string reason;
};

struct AspectTable {
    std::vector<AspectRow> rows;  // by app id, then aspect order
    std::vector<AspectReject> rejects;
};

AspectTable aggregate_absa(std::span<const AspectPolarityRecord> records, const ReviewIndex& reviews);

struct TrendReview {
    std::string app_id;
    Timestamp posted_at{};
    SentimentLabel label = SentimentLabel::Neutral;
    std::optional<std::string> app_version;
};

struct MonthlyPoint {
    YearMonth month;
    std::array<std::size_t, kNumClasses> counts{};
    std::array<double, kNumClasses> proportions{};  // zeros for empty months
    std::size_t total = 0;
    bool version_change = false;
};

struct TrendSeries {
    std::string name;  // "overall" or an app id
    std::vector<MonthlyPoint> points;
};

// Every series spans the same months, first to last review month inclusive.
struct TrendReport {
    std::vector<TrendSeries> series;  // overall first, then apps in id order
};

TrendReport monthly_trends(std::span<const TrendReview> reviews);

nlohmann::json to_json(const AppSentimentProfile& p);
nlohmann::json to_json(const AspectTable& t);
nlohmann::json to_json(const TrendReport& t);

std::string format_ranking_table(std::span<const AppSentimentProfile> ranked,
                                 const std::map<std::string, double>& corpus_avg_rating = {});
std::string format_aspect_table(const AspectTable& t);
// Plot-ready rows: app_id, aspect, metric, value
std::string aspect_tsv(const AspectTable& t);
// Plot-ready rows: month, series, value (series = "<name>:<label>" or "<name>:version_change")
std::string trend_tsv(const TrendReport& t);

}  // namespace revsent::analytics
