#include "revsent/stats.hpp"

#include "revsent/error.hpp"
#include "revsent/io.hpp"
#include "revsent/parallel.hpp"
#include "revsent/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace revsent::stats {

using nlohmann::json;

namespace {

std::array<std::vector<std::size_t>, kNumClasses> members_by_class(std::span<const SentimentLabel> labels) {
    std::array<std::vector<std::size_t>, kNumClasses> members;
    for (std::size_t i = 0; i < labels.size(); ++i) members[index_of(labels[i])].push_back(i);
    return members;
}

}  // namespace

Split stratified_split(std::span<const SentimentLabel> labels, double ratio, std::uint64_t seed) {
    require(ratio > 0.0 && ratio < 1.0, "stratified_split: ratio must lie in (0, 1)");
    require(labels.size() >= 2, "stratified_split: need at least two samples");

    auto members = members_by_class(labels);
    std::array<std::size_t, kNumClasses> quota{};
    std::array<double, kNumClasses> remainder{};
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        const double exact = static_cast<double>(members[c].size()) * ratio;
        quota[c] = static_cast<std::size_t>(std::floor(exact));
        remainder[c] = exact - static_cast<double>(quota[c]);
        assigned += quota[c];
    }
    const auto total = static_cast<std::size_t>(std::floor(static_cast<double>(labels.size()) * ratio + 0.5));
    std::array<std::size_t, kNumClasses> order{0, 1, 2};
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t c : order) {
        if (assigned >= total) break;
        if (remainder[c] > 0.0 && quota[c] < members[c].size()) {
            ++quota[c];
            ++assigned;
        }
    }

    Split split;
    split.ratio = ratio;
    split.seed = seed;
    Rng rng(seed);
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        auto& idx = members[c];
        rng.shuffle(idx);
        split.test.insert(split.test.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(quota[c]));
        split.train.insert(split.train.end(), idx.begin() + static_cast<std::ptrdiff_t>(quota[c]), idx.end());
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

std::vector<std::size_t> stratified_kfold(std::span<const SentimentLabel> labels, std::size_t k,
                                          std::uint64_t seed, std::vector<std::string>* warnings) {
    require(k >= 2, "stratified_kfold: k must be at least 2");
    require(labels.size() >= k, "stratified_kfold: fewer samples than folds");
    auto members = members_by_class(labels);
    std::vector<std::size_t> fold(labels.size(), 0);
    Rng rng(seed);
    std::size_t deal = 0;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        auto& idx = members[c];
        if (!idx.empty() && idx.size() < k && warnings) {
            warnings->push_back("class " + std::string(to_string(label_at(c))) + " has " +
                                std::to_string(idx.size()) + " members, fewer than " + std::to_string(k) +
                                " folds");
        }
        rng.shuffle(idx);
        for (std::size_t i : idx) fold[i] = deal++ % k;
    }
    return fold;
}

std::size_t ConfusionMatrix::total() const {
    std::size_t t = 0;
    for (const auto& row : counts) t += std::accumulate(row.begin(), row.end(), std::size_t{0});
    return t;
}

std::size_t ConfusionMatrix::trace() const {
    std::size_t t = 0;
    for (std::size_t i = 0; i < kNumClasses; ++i) t += counts[i][i];
    return t;
}

Metrics metrics_from_confusion(const ConfusionMatrix& cm) {
    Metrics m;
    m.n = cm.total();
    require(m.n > 0, "metrics: empty confusion matrix");
    const double n = static_cast<double>(m.n);
    m.accuracy = static_cast<double>(cm.trace()) / n;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        auto& pc = m.per_class[c];
        for (std::size_t j = 0; j < kNumClasses; ++j) {
            pc.support += cm.counts[c][j];
            pc.predicted += cm.counts[j][c];
        }
        const double tp = static_cast<double>(cm.counts[c][c]);
        const std::string name(to_string(label_at(c)));
        if (pc.predicted > 0) {
            pc.precision = tp / static_cast<double>(pc.predicted);
        } else {
            m.flags.push_back(name + ": precision 0/0");
        }
        if (pc.support > 0) {
            pc.recall = tp / static_cast<double>(pc.support);
        } else {
            m.flags.push_back(name + ": recall 0/0 (class absent)");
        }
        pc.f1 = (pc.precision + pc.recall > 0.0) ? 2.0 * pc.precision * pc.recall / (pc.precision + pc.recall) : 0.0;

        const double w = static_cast<double>(pc.support) / n;
        m.weighted_precision += w * pc.precision;
        m.weighted_recall += w * pc.recall;
        m.weighted_f1 += w * pc.f1;
        m.macro_precision += pc.precision / kNumClasses;
        m.macro_recall += pc.recall / kNumClasses;
        m.macro_f1 += pc.f1 / kNumClasses;
    }
    return m;
}

Evaluation classification_metrics(std::span<const SentimentLabel> y_true, std::span<const SentimentLabel> y_pred) {
    require(y_true.size() == y_pred.size(), "classification_metrics: length mismatch");
    require(!y_true.empty(), "classification_metrics: empty input");
    Evaluation ev;
    for (std::size_t i = 0; i < y_true.size(); ++i) ++ev.confusion.counts[index_of(y_true[i])][index_of(y_pred[i])];
    ev.metrics = metrics_from_confusion(ev.confusion);
    return ev;
}

std::string_view to_string(MetricKind kind) {
    switch (kind) {
        case MetricKind::Accuracy: return "accuracy";
        case MetricKind::WeightedPrecision: return "weighted_precision";
        case MetricKind::WeightedRecall: return "weighted_recall";
        case MetricKind::WeightedF1: return "weighted_f1";
        case MetricKind::MacroF1: return "macro_f1";
    }
    return "";
}

double select(const Metrics& m, MetricKind kind) {
    switch (kind) {
        case MetricKind::Accuracy: return m.accuracy;
        case MetricKind::WeightedPrecision: return m.weighted_precision;
        case MetricKind::WeightedRecall: return m.weighted_recall;
        case MetricKind::WeightedF1: return m.weighted_f1;
        case MetricKind::MacroF1: return m.macro_f1;
    }
    return 0.0;
}

double percentile(std::span<const double> sorted, double q) {
    require(!sorted.empty(), "percentile: empty sample");
    const double h = static_cast<double>(sorted.size() - 1) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

BootstrapCI bootstrap_ci(std::span<const SentimentLabel> y_true, std::span<const SentimentLabel> y_pred,
                         MetricKind metric, std::size_t resamples, double level, std::uint64_t seed) {
    require(y_true.size() == y_pred.size(), "bootstrap_ci: length mismatch");
    require(!y_true.empty(), "bootstrap_ci: empty input");
    require(resamples >= 100, "bootstrap_ci: need at least 100 resamples");
    require(level > 0.0 && level < 1.0, "bootstrap_ci: level must lie in (0, 1)");

    BootstrapCI ci;
    ci.metric = metric;
    ci.resamples = resamples;
    ci.level = level;
    ci.seed = seed;
    ci.point = select(classification_metrics(y_true, y_pred).metrics, metric);

    const std::size_t n = y_true.size();
    std::vector<double> values(resamples);
    parallel_for(resamples, [&](std::size_t b) {
        Rng rng(derive_seed(seed, b));
        ConfusionMatrix cm;
        for (std::size_t i = 0; i < n; ++i) {
            const auto j = static_cast<std::size_t>(rng.uniform_index(n));
            ++cm.counts[index_of(y_true[j])][index_of(y_pred[j])];
        }
        values[b] = select(metrics_from_confusion(cm), metric);
    });
    std::sort(values.begin(), values.end());
    const double alpha = (1.0 - level) / 2.0;
    ci.lower = percentile(values, alpha);
    ci.upper = percentile(values, 1.0 - alpha);
    return ci;
}

double chi2_sf_1df(double x) {
    require(x >= 0.0, "chi2_sf_1df: negative argument");
    // P(chi2_1 > x) = P(|Z| > sqrt(x)) = erfc(sqrt(x / 2))
    return std::erfc(std::sqrt(x / 2.0));
}

McNemarResult mcnemar_from_counts(std::size_t b, std::size_t c) {
    McNemarResult r;
    r.b = b;
    r.c = c;
    if (b + c == 0) {
        r.degenerate = true;
        return r;
    }
    const double diff = std::fabs(static_cast<double>(b) - static_cast<double>(c));
    const double corrected = std::max(diff - 1.0, 0.0);
    r.chi2 = corrected * corrected / static_cast<double>(b + c);
    r.p_value = chi2_sf_1df(r.chi2);
    r.significant = r.p_value < 0.05;
    return r;
}

McNemarResult mcnemar(std::span<const SentimentLabel> y_true, std::span<const SentimentLabel> pred_a,
                      std::span<const SentimentLabel> pred_b) {
    require(y_true.size() == pred_a.size() && y_true.size() == pred_b.size(), "mcnemar: length mismatch");
    std::size_t b = 0, c = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const bool a_ok = pred_a[i] == y_true[i];
        const bool b_ok = pred_b[i] == y_true[i];
        if (a_ok && !b_ok) ++b;
        if (!a_ok && b_ok) ++c;
    }
    return mcnemar_from_counts(b, c);
}

std::string format_p_value(double p) {
    if (p < 0.001) return "<0.001";
    return io::fixed(p, 3);
}

LanguageEval language_stratified_eval(std::span<const LanguageTag> languages, std::span<const SentimentLabel> y_true,
                                      std::span<const SentimentLabel> y_pred, std::size_t resamples, double level,
                                      std::uint64_t seed) {
    require(languages.size() == y_true.size() && y_true.size() == y_pred.size(),
            "language_stratified_eval: length mismatch");
    LanguageEval out;
    std::size_t stream = 0;
    for (LanguageTag lang : {LanguageTag::English, LanguageTag::Bangla}) {
        std::vector<SentimentLabel> t, p;
        for (std::size_t i = 0; i < languages.size(); ++i) {
            require(languages[i] != LanguageTag::Other, "language_stratified_eval: item without a bilingual tag");
            if (languages[i] == lang) {
                t.push_back(y_true[i]);
                p.push_back(y_pred[i]);
            }
        }
        const std::uint64_t lang_seed = derive_seed(seed, stream++);
        if (t.empty()) {
            out.warnings.push_back("no " + std::string(to_string(lang)) + " items; row omitted");
            continue;
        }
        LanguageRow row;
        row.language = lang;
        row.metrics = classification_metrics(t, p).metrics;
        row.weighted_f1_ci = bootstrap_ci(t, p, MetricKind::WeightedF1, resamples, level, lang_seed);
        out.rows.push_back(std::move(row));
    }
    if (out.rows.size() == 2) {
        const auto& en = out.rows[0].metrics;
        const auto& bn = out.rows[1].metrics;
        out.gap = LanguageGap{en.accuracy - bn.accuracy, en.weighted_f1 - bn.weighted_f1, en.macro_f1 - bn.macro_f1};
    }
    return out;
}

json to_json(const Metrics& m) {
    json per_class = json::object();
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        const auto& pc = m.per_class[c];
        per_class[std::string(to_string(label_at(c)))] = {{"precision", pc.precision}, {"recall", pc.recall},
                                                          {"f1", pc.f1}, {"support", pc.support},
                                                          {"predicted", pc.predicted}};
    }
    return json{{"n", m.n},
                {"accuracy", m.accuracy},
                {"weighted_precision", m.weighted_precision},
                {"weighted_recall", m.weighted_recall},
                {"weighted_f1", m.weighted_f1},
                {"macro_precision", m.macro_precision},
                {"macro_recall", m.macro_recall},
                {"macro_f1", m.macro_f1},
                {"per_class", per_class},
                {"flags", m.flags}};
}

json to_json(const ConfusionMatrix& cm) {
    json rows = json::array();
    for (const auto& row : cm.counts) rows.push_back(json(row));
    return json{{"rows_true_cols_pred", rows}, {"class_order", {"negative", "neutral", "positive"}}};
}

json to_json(const BootstrapCI& ci) {
    return json{{"metric", std::string(to_string(ci.metric))},
                {"point", ci.point},
                {"lower", ci.lower},
                {"upper", ci.upper},
                {"resamples", ci.resamples},
                {"level", ci.level},
                {"seed", ci.seed}};
}

json to_json(const McNemarResult& r) {
    return json{{"b", r.b}, {"c", r.c}, {"chi2", r.chi2}, {"p_value", r.p_value},
                {"significant", r.significant}, {"degenerate", r.degenerate}};
}

json to_json(const LanguageEval& e) {
    json rows = json::array();
    for (const auto& r : e.rows) {
        rows.push_back({{"language", std::string(to_string(r.language))},
                        {"metrics", to_json(r.metrics)},
                        {"weighted_f1_ci", to_json(r.weighted_f1_ci)}});
    }
    json gap = nullptr;
    if (e.gap) gap = {{"accuracy", e.gap->accuracy}, {"weighted_f1", e.gap->weighted_f1}, {"macro_f1", e.gap->macro_f1}};
    return json{{"rows", rows}, {"gap", gap}, {"warnings", e.warnings}};
}

}  // namespace revsent::stats
