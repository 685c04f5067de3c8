#pragma once

#include "revsent/types.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace revsent::stats {

struct Split {
    std::vector<std::size_t> train;  // ascending
    std::vector<std::size_t> test;   // ascending
    double ratio = 0.2;
    std::uint64_t seed = 0;
};

// Per-class test quotas by largest remainder of class_count * ratio, with the
// total forced to round(n * ratio); remainder ties go to the lower class
// index. Members are chosen by a seeded shuffle within each class.
Split stratified_split(std::span<const SentimentLabel> labels, double ratio, std::uint64_t seed);

// Fold id in [0, k) per sample. Classes are shuffled and dealt round-robin,
// continuing the deal across classes. Classes with fewer than k members get
// a warning but stay in.
std::vector<std::size_t> stratified_kfold(std::span<const SentimentLabel> labels, std::size_t k,
                                          std::uint64_t seed, std::vector<std::string>* warnings = nullptr);

// rows = true class, columns = predicted class
struct ConfusionMatrix {
    std::array<std::array<std::size_t, kNumClasses>, kNumClasses> counts{};

    std::size_t total() const;
    std::size_t trace() const;
};

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;    // true count
    std::size_t predicted = 0;  // predicted count
};

struct Metrics {
    std::size_t n = 0;
    double accuracy = 0.0;
    std::array<ClassMetrics, kNumClasses> per_class{};
    double weighted_precision = 0.0;
    double weighted_recall = 0.0;
    double weighted_f1 = 0.0;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    // Classes whose precision or recall hit 0/0 and were set to 0.
    std::vector<std::string> flags;
};

Metrics metrics_from_confusion(const ConfusionMatrix& cm);

struct Evaluation {
    ConfusionMatrix confusion;
    Metrics metrics;
};

Evaluation classification_metrics(std::span<const SentimentLabel> y_true, std::span<const SentimentLabel> y_pred);

enum class MetricKind { Accuracy, WeightedPrecision, WeightedRecall, WeightedF1, MacroF1 };

std::string_view to_string(MetricKind kind);
double select(const Metrics& m, MetricKind kind);

struct BootstrapCI {
    MetricKind metric = MetricKind::WeightedF1;
    double point = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    std::size_t resamples = 0;
    double level = 0.95;
    std::uint64_t seed = 0;
};

// Linear interpolation between order statistics at h = (n - 1) * q.
double percentile(std::span<const double> sorted, double q);

// Percentile bootstrap over (true, pred) pairs. Resample b draws from its own
// stream derive_seed(seed, b). Requires n >= 1 and resamples >= 100.
BootstrapCI bootstrap_ci(std::span<const SentimentLabel> y_true, std::span<const SentimentLabel> y_pred,
                         MetricKind metric, std::size_t resamples = 2000, double level = 0.95,
                         std::uint64_t seed = 0);

struct McNemarResult {
    std::size_t b = 0;  // A right, B wrong
    std::size_t c = 0;  // A wrong, B right
    double chi2 = 0.0;
    double p_value = 1.0;
    bool significant = false;  // p < 0.05
    bool degenerate = false;   // b + c == 0
};

// Continuity-corrected, numerator clamped at zero when |b - c| <= 1.
McNemarResult mcnemar_from_counts(std::size_t b, std::size_t c);
McNemarResult mcnemar(std::span<const SentimentLabel> y_true, std::span<const SentimentLabel> pred_a,
                      std::span<const SentimentLabel> pred_b);

// Upper tail of the chi-square distribution with one degree of freedom.
double chi2_sf_1df(double x);

// "<0.001" below one in a thousand, otherwise three decimals.
std::string format_p_value(double p);

struct LanguageRow {
    LanguageTag language = LanguageTag::English;
    Metrics metrics;
    BootstrapCI weighted_f1_ci;
};

struct LanguageGap {
    double accuracy = 0.0;
    double weighted_f1 = 0.0;
    double macro_f1 = 0.0;
};

struct LanguageEval {
    std::vector<LanguageRow> rows;  // English first, then Bangla
    std::optional<LanguageGap> gap; // English minus Bangla, when both rows exist
    std::vector<std::string> warnings;
};

LanguageEval language_stratified_eval(std::span<const LanguageTag> languages,
                                      std::span<const SentimentLabel> y_true,
                                      std::span<const SentimentLabel> y_pred, std::size_t resamples = 2000,
                                      double level = 0.95, std::uint64_t seed = 0);

nlohmann::json to_json(const Metrics& m);
nlohmann::json to_json(const ConfusionMatrix& cm);
nlohmann::json to_json(const BootstrapCI& ci);
nlohmann::json to_json(const McNemarResult& r);
nlohmann::json to_json(const LanguageEval& e);

}  // namespace revsent::stats
