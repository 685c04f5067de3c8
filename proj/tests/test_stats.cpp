#include "revsent/error.hpp"
#include "revsent/rng.hpp"
#include "revsent/stats.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace revsent;
using namespace revsent::stats;

namespace {

constexpr auto N = SentimentLabel::Negative;
constexpr auto U = SentimentLabel::Neutral;
constexpr auto P = SentimentLabel::Positive;

// 80 of every 100 predictions correct; the wrong ones shift class by one.
void eighty_percent(std::size_t repeats, std::vector<SentimentLabel>& t, std::vector<SentimentLabel>& p) {
    for (std::size_t r = 0; r < repeats; ++r) {
        for (std::size_t i = 0; i < 100; ++i) {
            const auto truth = label_at(i % 3);
            t.push_back(truth);
            p.push_back(i % 5 == 4 ? label_at((i + 1) % 3) : truth);
        }
    }
}

}  // namespace

TEST_CASE("stratified split: largest remainder example") {
    std::vector<SentimentLabel> y{P, P, P, P, P, P, N, N, U, U};
    auto s = stratified_split(y, 0.2, 1);
    REQUIRE(s.test.size() == 2);
    std::array<int, 3> per{};
    for (auto i : s.test) ++per[index_of(y[i])];
    CHECK(per[index_of(P)] == 1);
    CHECK(per[index_of(N)] == 1);
    CHECK(per[index_of(U)] == 0);
    CHECK(s.train.size() == 8);
    auto again = stratified_split(y, 0.2, 1);
    CHECK(again.test == s.test);
    CHECK(again.train == s.train);
    CHECK_THROWS_AS(stratified_split(y, 1.0, 1), ContractViolation);
    CHECK_THROWS_AS(stratified_split(y, 0.0, 1), ContractViolation);
}

TEST_CASE("stratified split: balanced halves and per-class shares") {
    std::vector<SentimentLabel> y;
    for (int i = 0; i < 30; ++i) y.push_back(label_at(static_cast<std::size_t>(i % 3)));
    auto half = stratified_split(y, 0.5, 4);
    std::array<int, 3> per{};
    for (auto i : half.test) ++per[index_of(y[i])];
    CHECK(per == std::array<int, 3>{5, 5, 5});

    Rng rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<SentimentLabel> z;
        const std::size_t n = 2 + rng.uniform_index(300);
        for (std::size_t i = 0; i < n; ++i) z.push_back(label_at(rng.uniform_index(3)));
        const double ratio = 0.05 + 0.9 * rng.uniform01();
        auto s = stratified_split(z, ratio, trial);
        CHECK(s.train.size() + s.test.size() == n);
        std::vector<int> seen(n, 0);
        for (auto i : s.train) ++seen[i];
        for (auto i : s.test) ++seen[i];
        CHECK(std::all_of(seen.begin(), seen.end(), [](int v) { return v == 1; }));
        std::array<double, 3> count{}, test{};
        for (auto l : z) count[index_of(l)] += 1;
        for (auto i : s.test) test[index_of(z[i])] += 1;
        for (int c = 0; c < 3; ++c) CHECK(std::abs(test[c] - count[c] * ratio) < 1.0);
    }
}

TEST_CASE("stratified kfold deals every class across folds") {
    std::vector<SentimentLabel> y;
    for (int i = 0; i < 50; ++i) y.push_back(label_at(static_cast<std::size_t>(i % 3)));
    std::vector<std::string> warnings;
    auto folds = stratified_kfold(y, 5, 1, &warnings);
    CHECK(warnings.empty());
    std::array<std::array<int, 3>, 5> per{};
    for (std::size_t i = 0; i < y.size(); ++i) ++per[folds[i]][index_of(y[i])];
    for (int c = 0; c < 3; ++c) {
        int lo = 1000, hi = 0;
        for (int f = 0; f < 5; ++f) {
            lo = std::min(lo, per[f][c]);
            hi = std::max(hi, per[f][c]);
        }
        CHECK(hi - lo <= 1);
    }
    std::vector<SentimentLabel> rare{P, P, P, P, P, P, N, N};
    auto w = std::vector<std::string>{};
    stratified_kfold(rare, 5, 1, &w);
    CHECK_FALSE(w.empty());
}

TEST_CASE("classification metrics examples") {
    auto e = classification_metrics(std::vector{P, P, N}, std::vector{P, N, N});
    CHECK(e.metrics.per_class[index_of(P)].f1 == doctest::Approx(2.0 / 3.0));
    CHECK(e.metrics.per_class[index_of(N)].f1 == doctest::Approx(2.0 / 3.0));
    CHECK(e.metrics.weighted_f1 == doctest::Approx(2.0 / 3.0));
    CHECK(e.metrics.accuracy == doctest::Approx(2.0 / 3.0));

    auto perfect = classification_metrics(std::vector{P, N, U}, std::vector{P, N, U});
    CHECK(perfect.metrics.accuracy == 1.0);
    CHECK(perfect.metrics.weighted_f1 == 1.0);
    CHECK(perfect.metrics.macro_f1 == 1.0);

    auto constant = classification_metrics(std::vector{P, N, U}, std::vector{P, P, P});
    CHECK(constant.metrics.accuracy == doctest::Approx(1.0 / 3.0));
    CHECK(constant.metrics.per_class[index_of(P)].precision == doctest::Approx(1.0 / 3.0));
    CHECK(constant.metrics.per_class[index_of(P)].recall == 1.0);
    CHECK(constant.metrics.per_class[index_of(P)].f1 == doctest::Approx(0.5));
    CHECK(constant.metrics.macro_f1 == doctest::Approx(0.5 / 3.0));
    CHECK_FALSE(constant.metrics.flags.empty());

    CHECK_THROWS_AS(classification_metrics(std::vector{P}, std::vector{P, N}), ContractViolation);
}

TEST_CASE("classification metrics match direct formulas on small inputs") {
    Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.uniform_index(10);
        std::vector<SentimentLabel> t, p;
        for (std::size_t i = 0; i < n; ++i) {
            t.push_back(label_at(rng.uniform_index(3)));
            p.push_back(label_at(rng.uniform_index(3)));
        }
        const auto m = classification_metrics(t, p).metrics;
        double wf1 = 0.0, mf1 = 0.0, correct = 0.0;
        for (int c = 0; c < 3; ++c) {
            double tp = 0, fp = 0, fn = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const bool is_t = index_of(t[i]) == static_cast<std::size_t>(c);
                const bool is_p = index_of(p[i]) == static_cast<std::size_t>(c);
                tp += is_t && is_p;
                fp += !is_t && is_p;
                fn += is_t && !is_p;
            }
            const double prec = tp + fp > 0 ? tp / (tp + fp) : 0.0;
            const double rec = tp + fn > 0 ? tp / (tp + fn) : 0.0;
            const double f1 = prec + rec > 0 ? 2 * prec * rec / (prec + rec) : 0.0;
            wf1 += f1 * (tp + fn) / static_cast<double>(n);
            mf1 += f1 / 3.0;
            correct += tp;
        }
        CHECK(m.accuracy == doctest::Approx(correct / static_cast<double>(n)).epsilon(1e-15));
        CHECK(m.weighted_f1 == doctest::Approx(wf1).epsilon(1e-12));
        CHECK(m.macro_f1 == doctest::Approx(mf1).epsilon(1e-12));
        CHECK(std::abs(m.weighted_recall - m.accuracy) < 1e-12);
    }
}

TEST_CASE("bootstrap confidence intervals") {
    std::vector<SentimentLabel> t{P, N, U, P};
    auto all = bootstrap_ci(t, t, MetricKind::WeightedF1, 200, 0.95, 1);
    CHECK(all.lower == 1.0);
    CHECK(all.upper == 1.0);
    CHECK(all.point == 1.0);
    CHECK_THROWS_AS(bootstrap_ci(t, t, MetricKind::Accuracy, 50, 0.95, 1), ContractViolation);

    std::vector<SentimentLabel> t1, p1, t4, p4;
    eighty_percent(1, t1, p1);
    eighty_percent(4, t4, p4);
    auto small = bootstrap_ci(t1, p1, MetricKind::Accuracy, 2000, 0.95, 7);
    auto large = bootstrap_ci(t4, p4, MetricKind::Accuracy, 2000, 0.95, 7);
    CHECK(small.point == doctest::Approx(0.8));
    CHECK(small.lower <= 0.8);
    CHECK(small.upper >= 0.8);
    const double ratio = (small.upper - small.lower) / (large.upper - large.lower);
    CHECK(ratio >= 1.6);
    CHECK(ratio <= 2.6);
    auto same = bootstrap_ci(t1, p1, MetricKind::Accuracy, 2000, 0.95, 7);
    CHECK(same.lower == small.lower);
    CHECK(same.upper == small.upper);

    auto spread = [&](std::size_t B) {
        auto a = bootstrap_ci(t1, p1, MetricKind::Accuracy, B, 0.95, 1);
        auto b = bootstrap_ci(t1, p1, MetricKind::Accuracy, B, 0.95, 2);
        return std::abs(a.lower - b.lower) + std::abs(a.upper - b.upper);
    };
    CHECK(spread(20000) < spread(200) + 1e-12);
}

TEST_CASE("percentile interpolation") {
    std::vector<double> v{1.0, 2.0, 3.0, 4.0, 5.0};
    CHECK(percentile(v, 0.0) == 1.0);
    CHECK(percentile(v, 1.0) == 5.0);
    CHECK(percentile(v, 0.5) == 3.0);
    CHECK(percentile(v, 0.1) == doctest::Approx(1.4));
}

TEST_CASE("mcnemar examples and antisymmetry") {
    auto r = mcnemar_from_counts(10, 2);
    CHECK(std::abs(r.chi2 - 49.0 / 12.0) < 1e-12);
    CHECK(std::abs(r.p_value - 0.0433) < 5e-4);
    CHECK(r.significant);
    auto five = mcnemar_from_counts(5, 5);
    CHECK(five.chi2 == 0.0);
    CHECK(five.p_value == 1.0);
    auto none = mcnemar_from_counts(0, 0);
    CHECK(none.degenerate);
    CHECK(none.p_value == 1.0);
    CHECK_FALSE(none.significant);

    std::vector<SentimentLabel> t{P, P, N, U, N, P}, a{P, N, N, U, P, P}, b{P, P, U, N, N, P};
    auto ab = mcnemar(t, a, b);
    auto ba = mcnemar(t, b, a);
    CHECK(ab.b == ba.c);
    CHECK(ab.c == ba.b);
    CHECK(ab.chi2 == ba.chi2);
    CHECK(ab.p_value == ba.p_value);
    auto same = mcnemar(t, a, a);
    CHECK(same.p_value == 1.0);
    CHECK_THROWS_AS(mcnemar(t, a, std::vector<SentimentLabel>{P}), ContractViolation);
}

TEST_CASE("chi-square tail against quadrature") {
    CHECK(chi2_sf_1df(0.0) == 1.0);
    CHECK(std::abs(chi2_sf_1df(3.841) - 0.05) < 5e-4);
    CHECK(chi2_sf_1df(76.11) < 1e-17);
    CHECK(format_p_value(chi2_sf_1df(76.11)) == "<0.001");
    CHECK_THROWS_AS(chi2_sf_1df(-1.0), ContractViolation);
    double prev = 2.0;
    for (int i = 0; i <= 1000; ++i) {
        const double x = 0.02 * i;
        const double p = chi2_sf_1df(x);
        CHECK(std::abs(p - oracle::chi2_sf_1df(x)) < 1e-10);
        CHECK(p < prev);
        prev = p;
    }
}

TEST_CASE("language stratified evaluation") {
    std::vector<LanguageTag> langs;
    std::vector<SentimentLabel> t, p;
    for (int i = 0; i < 20; ++i) {
        langs.push_back(LanguageTag::English);
        t.push_back(label_at(static_cast<std::size_t>(i % 3)));
        p.push_back(t.back());
    }
    for (int i = 0; i < 20; ++i) {
        langs.push_back(LanguageTag::Bangla);
        t.push_back(label_at(static_cast<std::size_t>(i % 3)));
        p.push_back(i % 2 == 0 ? t.back() : label_at(static_cast<std::size_t>((i + 1) % 3)));
    }
    auto e = language_stratified_eval(langs, t, p, 200, 0.95, 1);
    REQUIRE(e.rows.size() == 2);
    REQUIRE(e.gap.has_value());
    CHECK(e.gap->accuracy == doctest::Approx(0.5));

    std::vector<SentimentLabel> p_same = t;
    auto sym = language_stratified_eval(langs, t, p_same, 200, 0.95, 1);
    CHECK(sym.gap->accuracy == 0.0);
    CHECK(sym.gap->weighted_f1 == 0.0);
    CHECK(sym.gap->macro_f1 == 0.0);

    std::vector<LanguageTag> only(t.size(), LanguageTag::English);
    auto single = language_stratified_eval(only, t, p, 200, 0.95, 1);
    CHECK(single.rows.size() == 1);
    CHECK_FALSE(single.gap.has_value());
    CHECK_FALSE(single.warnings.empty());
}
