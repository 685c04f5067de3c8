#include "revsent/labeling.hpp"

#include "revsent/error.hpp"

#include <unordered_map>
#include <unordered_set>

namespace revsent::labeling {

using nlohmann::json;

SentimentLabel star_to_sentiment(int rating) {
    require(rating >= 1 && rating <= 5, "star_to_sentiment: rating " + std::to_string(rating) + " outside 1..5");
    if (rating <= 2) return SentimentLabel::Negative;
    if (rating == 3) return SentimentLabel::Neutral;
    return SentimentLabel::Positive;
}

json to_json(const LabeledReview& r) {
    json j = corpus::to_json(r.review);
    j["star_label"] = std::string(to_string(r.star_label));
    j["model_label"] = r.model_label ? json(std::string(to_string(*r.model_label))) : json(nullptr);
    j["model_confidence"] = r.model_confidence ? json(*r.model_confidence) : json(nullptr);
    const auto c = r.consensus();
    j["consensus"] = c ? json(*c) : json(nullptr);
    return j;
}

LabeledReview labeled_review_from_json(const json& j) {
    LabeledReview out;
    out.review = corpus::clean_review_from_json(j);
    const std::string& id = out.review.raw.review_id;
    auto read_label = [&](const char* key) -> std::optional<SentimentLabel> {
        auto it = j.find(key);
        if (it == j.end() || it->is_null()) return std::nullopt;
        if (!it->is_string()) throw ValidationError("record " + id + ": " + key + " is not a string");
        auto label = parse_label(it->get<std::string>());
        if (!label) throw ValidationError("record " + id + ": bad " + key);
        return label;
    };
    auto star = read_label("star_label");
    out.star_label = star ? *star : star_to_sentiment(out.review.raw.rating);
    out.model_label = read_label("model_label");
    if (auto it = j.find("model_confidence"); it != j.end() && it->is_number()) {
        out.model_confidence = it->get<double>();
    }
    return out;
}

std::vector<LabeledReview> star_labeled(std::span<const corpus::CleanReview> reviews) {
    std::vector<LabeledReview> out;
    out.reserve(reviews.size());
    for (const auto& r : reviews) out.push_back({r, star_to_sentiment(r.raw.rating), std::nullopt, std::nullopt});
    return out;
}

JoinResult join_model_labels(std::span<const corpus::CleanReview> reviews,
                             std::span<const ModelLabelRecord> labels) {
    std::unordered_map<std::string_view, const ModelLabelRecord*> by_id;
    for (const auto& rec : labels) {
        if (!by_id.emplace(rec.review_id, &rec).second) {
            throw ValidationError("duplicate model label for review_id " + rec.review_id);
        }
    }
    JoinResult result;
    std::unordered_set<std::string_view> corpus_ids;
    for (const auto& r : reviews) {
        corpus_ids.insert(r.raw.review_id);
        LabeledReview lr{r, star_to_sentiment(r.raw.rating), std::nullopt, std::nullopt};
        if (auto it = by_id.find(r.raw.review_id); it != by_id.end()) {
            lr.model_label = it->second->label;
            lr.model_confidence = it->second->confidence;
        } else {
            result.missing_labels.push_back(r.raw.review_id);
        }
        result.labeled.push_back(std::move(lr));
    }
    for (const auto& rec : labels) {
        if (!corpus_ids.count(rec.review_id)) result.unknown_ids.push_back(rec.review_id);
    }
    return result;
}

ConsensusSplit consensus_filter(std::span<const LabeledReview> labeled) {
    ConsensusSplit split;
    for (const auto& r : labeled) {
        const auto c = r.consensus();
        require(c.has_value(), "consensus_filter: review " + r.review.raw.review_id + " has no model label");
        (*c ? split.kept : split.dropped).push_back(r);
    }
    return split;
}

KappaResult cohens_kappa(const AgreementMatrix& agreement) {
    KappaResult result;
    result.agreement = agreement;
    std::array<double, kNumClasses> row{};
    std::array<double, kNumClasses> col{};
    std::size_t diag = 0;
    for (std::size_t i = 0; i < kNumClasses; ++i) {
        for (std::size_t j = 0; j < kNumClasses; ++j) {
            result.n += agreement[i][j];
            row[i] += static_cast<double>(agreement[i][j]);
            col[j] += static_cast<double>(agreement[i][j]);
        }
        diag += agreement[i][i];
    }
    require(result.n > 0, "cohens_kappa: empty input");
    const double n = static_cast<double>(result.n);
    result.p_o = static_cast<double>(diag) / n;
    for (std::size_t c = 0; c < kNumClasses; ++c) result.p_e += (row[c] / n) * (col[c] / n);
    // p_e reaches 1 only when both raters use one and the same class.
    bool single_class = false;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        if (agreement[c][c] == result.n) single_class = true;
    }
    if (single_class) {
        result.p_e = 1.0;
        result.kappa = 1.0;
        result.degenerate = true;
    } else {
        result.kappa = (result.p_o - result.p_e) / (1.0 - result.p_e);
    }
    return result;
}

KappaResult cohens_kappa(std::span<const SentimentLabel> a, std::span<const SentimentLabel> b) {
    require(a.size() == b.size(), "cohens_kappa: length mismatch");
    require(!a.empty(), "cohens_kappa: empty input");
    AgreementMatrix m{};
    for (std::size_t i = 0; i < a.size(); ++i) ++m[index_of(a[i])][index_of(b[i])];
    return cohens_kappa(m);
}

json to_json(const KappaResult& k) {
    json matrix = json::array();
    for (const auto& row : k.agreement) matrix.push_back(json(row));
    return json{{"p_o", k.p_o}, {"p_e", k.p_e}, {"kappa", k.kappa}, {"n", k.n},
                {"agreement_matrix", matrix}, {"degenerate", k.degenerate},
                {"class_order", {"negative", "neutral", "positive"}}};
}

std::vector<ConsensusBreakdown> breakdown_by_language(const ConsensusSplit& split) {
    std::vector<ConsensusBreakdown> rows{{LanguageTag::English}, {LanguageTag::Bangla}};
    auto slot = [&](LanguageTag lang) -> ConsensusBreakdown& {
        return lang == LanguageTag::Bangla ? rows[1] : rows[0];
    };
    for (const auto& r : split.kept) {
        auto& s = slot(r.review.language);
        ++s.labeled;
        ++s.kept;
    }
    for (const auto& r : split.dropped) {
        auto& s = slot(r.review.language);
        ++s.labeled;
        ++s.dropped;
    }
    return rows;
}

}  // namespace revsent::labeling
