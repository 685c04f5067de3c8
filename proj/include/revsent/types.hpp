#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace revsent {

enum class LanguageTag { English, Bangla, Other };

std::string_view to_string(LanguageTag tag);
std::optional<LanguageTag> parse_language(std::string_view s);

// Class order is fixed everywhere: reports, matrices, model weights.
enum class SentimentLabel : std::uint8_t { Negative = 0, Neutral = 1, Positive = 2 };

inline constexpr std::size_t kNumClasses = 3;
inline constexpr std::array<SentimentLabel, kNumClasses> kAllLabels = {
    SentimentLabel::Negative, SentimentLabel::Neutral, SentimentLabel::Positive};

inline std::size_t index_of(SentimentLabel label) { return static_cast<std::size_t>(label); }
inline SentimentLabel label_at(std::size_t index) { return static_cast<SentimentLabel>(index); }

// Lowercase wire names: "negative", "neutral", "positive".
std::string_view to_string(SentimentLabel label);
std::optional<SentimentLabel> parse_label(std::string_view s);

enum class Aspect : std::uint8_t {
    UiUx = 0,
    Security,
    SpeedPerformance,
    CustomerService,
    Features,
    TransactionProcessing,
};

inline constexpr std::size_t kNumAspects = 6;
inline constexpr std::array<Aspect, kNumAspects> kAllAspects = {
    Aspect::UiUx, Aspect::Security, Aspect::SpeedPerformance,
    Aspect::CustomerService, Aspect::Features, Aspect::TransactionProcessing};

// Display names, e.g. "Speed/Performance"; also the wire format.
std::string_view to_string(Aspect aspect);
// File-name friendly slug, e.g. "speed_performance".
std::string_view aspect_slug(Aspect aspect);
std::optional<Aspect> parse_aspect(std::string_view s);

using Timestamp = std::chrono::sys_seconds;

// RFC 3339 with a 'Z' or numeric offset; fractional seconds are truncated.
std::optional<Timestamp> parse_rfc3339(std::string_view s);
// Always "YYYY-MM-DDTHH:MM:SSZ".
std::string format_rfc3339(Timestamp t);

struct YearMonth {
    int year = 0;
    unsigned month = 0;

    auto operator<=>(const YearMonth&) const = default;
    YearMonth next() const { return month == 12 ? YearMonth{year + 1, 1} : YearMonth{year, month + 1}; }
    std::string str() const;  // "2023-04"
};

YearMonth year_month_of(Timestamp t);

// One external model prediction for a review.
struct ModelLabelRecord {
    std::string review_id;
    SentimentLabel label = SentimentLabel::Neutral;
    double confidence = 0.0;
    std::string model_id;

    bool operator==(const ModelLabelRecord&) const = default;
};

struct AspectPolarityRecord {
    std::string review_id;
    Aspect aspect = Aspect::UiUx;
    SentimentLabel polarity = SentimentLabel::Neutral;
    double confidence = 0.0;

    bool operator==(const AspectPolarityRecord&) const = default;
};

}  // namespace revsent
