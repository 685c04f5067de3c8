#pragma once

#include "revsent/corpus.hpp"
#include "revsent/types.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace revsent::labeling {

// 1-2 stars negative, 3 neutral, 4-5 positive. Throws ContractViolation
// outside 1..5.
SentimentLabel star_to_sentiment(int rating);

struct LabeledReview {
    corpus::CleanReview review;
    SentimentLabel star_label = SentimentLabel::Neutral;
    std::optional<SentimentLabel> model_label;
    std::optional<double> model_confidence;

    // Defined only when model_label is present.
    std::optional<bool> consensus() const {
        if (!model_label) return std::nullopt;
        return *model_label == star_label;
    }
};

nlohmann::json to_json(const LabeledReview& r);
LabeledReview labeled_review_from_json(const nlohmann::json& j);

// Star labels only, no model label attached.
std::vector<LabeledReview> star_labeled(std::span<const corpus::CleanReview> reviews);

struct JoinResult {
    std::vector<LabeledReview> labeled;       // corpus order
    std::vector<std::string> missing_labels;  // corpus reviews without a model record
    std::vector<std::string> unknown_ids;     // model records matching no review
};

// Throws ValidationError when a review id appears twice among labels.
JoinResult join_model_labels(std::span<const corpus::CleanReview> reviews,
                             std::span<const ModelLabelRecord> labels);

struct ConsensusSplit {
    std::vector<LabeledReview> kept;
    std::vector<LabeledReview> dropped;
};

// Every element must carry a model label.
ConsensusSplit consensus_filter(std::span<const LabeledReview> labeled);

using AgreementMatrix = std::array<std::array<std::size_t, kNumClasses>, kNumClasses>;

struct KappaResult {
    double p_o = 0.0;
    double p_e = 0.0;
    double kappa = 0.0;
    std::size_t n = 0;
    AgreementMatrix agreement{};  // rows: first rater, columns: second rater
    bool degenerate = false;      // p_e == 1, kappa reported as 1
};

// Cohen's kappa over three classes. Requires equal, non-zero lengths.
KappaResult cohens_kappa(std::span<const SentimentLabel> a, std::span<const SentimentLabel> b);
KappaResult cohens_kappa(const AgreementMatrix& agreement);

nlohmann::json to_json(const KappaResult& k);

// Consensus breakdown per language, for the drop report.
struct ConsensusBreakdown {
    LanguageTag language = LanguageTag::English;
    std::size_t labeled = 0;
    std::size_t kept = 0;
    std::size_t dropped = 0;
};

std::vector<ConsensusBreakdown> breakdown_by_language(const ConsensusSplit& split);

}  // namespace revsent::labeling
