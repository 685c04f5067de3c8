#include "revsent/error.hpp"
#include "revsent/labeling.hpp"
#include "revsent/rng.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

using namespace revsent;
using namespace revsent::labeling;

namespace {

constexpr auto N = SentimentLabel::Negative;
constexpr auto U = SentimentLabel::Neutral;
constexpr auto P = SentimentLabel::Positive;

corpus::CleanReview clean(std::string id, int rating) {
    corpus::CleanReview r;
    r.raw.review_id = std::move(id);
    r.raw.app_id = "s";
    r.raw.text = "x y";
    r.raw.rating = rating;
    r.language = LanguageTag::English;
    r.normalized_text = "x y";
    return r;
}

}  // namespace

TEST_CASE("star ratings map to sentiment") {
    CHECK(star_to_sentiment(1) == N);
    CHECK(star_to_sentiment(2) == N);
    CHECK(star_to_sentiment(3) == U);
    CHECK(star_to_sentiment(4) == P);
    CHECK(star_to_sentiment(5) == P);
    CHECK_THROWS_AS(star_to_sentiment(0), ContractViolation);
    CHECK_THROWS_AS(star_to_sentiment(6), ContractViolation);
}

TEST_CASE("join_model_labels") {
    std::vector<corpus::CleanReview> reviews{clean("r1", 5), clean("r2", 5), clean("r3", 4)};
    std::vector<ModelLabelRecord> labels{{"r1", P, 0.91, "m"}, {"r2", N, 0.88, "m"}, {"zz", P, 0.5, "m"}};
    auto j = join_model_labels(reviews, labels);
    REQUIRE(j.labeled.size() == 3);
    CHECK(j.labeled[0].consensus() == true);
    CHECK(j.labeled[1].consensus() == false);
    CHECK_FALSE(j.labeled[2].model_label.has_value());
    CHECK_FALSE(j.labeled[2].consensus().has_value());
    CHECK(j.missing_labels == std::vector<std::string>{"r3"});
    CHECK(j.unknown_ids == std::vector<std::string>{"zz"});

    labels.push_back({"r1", N, 0.3, "m"});
    CHECK_THROWS_AS(join_model_labels(reviews, labels), ValidationError);
}

TEST_CASE("consensus_filter") {
    std::vector<corpus::CleanReview> reviews{clean("a", 5), clean("b", 1), clean("c", 3)};
    std::vector<ModelLabelRecord> labels{{"a", P, 0.9, "m"}, {"b", P, 0.9, "m"}, {"c", U, 0.9, "m"}};
    auto j = join_model_labels(reviews, labels);
    auto split = consensus_filter(j.labeled);
    REQUIRE(split.kept.size() == 2);
    CHECK(split.kept[0].review.raw.review_id == "a");
    CHECK(split.kept[1].review.raw.review_id == "c");
    CHECK(split.dropped.size() == 1);
    CHECK(consensus_filter(split.kept).dropped.empty());

    j.labeled[0].model_label.reset();
    CHECK_THROWS_AS(consensus_filter(j.labeled), ContractViolation);
}

TEST_CASE("cohens_kappa examples") {
    std::vector<SentimentLabel> a{P, N, U, P};
    CHECK(cohens_kappa(a, a).kappa == doctest::Approx(1.0));

    std::vector<SentimentLabel> x{P, P, N, N}, y{P, N, N, P};
    auto k = cohens_kappa(x, y);
    CHECK(k.p_o == doctest::Approx(0.5));
    CHECK(k.p_e == doctest::Approx(0.5));
    CHECK(k.kappa == doctest::Approx(0.0));

    std::vector<SentimentLabel> c{U, U, U};
    auto d = cohens_kappa(c, c);
    CHECK(d.degenerate);
    CHECK(d.kappa == 1.0);

    std::vector<SentimentLabel> shorter{P};
    CHECK_THROWS_AS(cohens_kappa(a, shorter), ContractViolation);
    CHECK_THROWS_AS(cohens_kappa(std::vector<SentimentLabel>{}, std::vector<SentimentLabel>{}), ContractViolation);
}

TEST_CASE("cohens_kappa: symmetry, permutation invariance, matrix sufficiency, oracle") {
    Rng rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 5 + rng.uniform_index(60);
        std::vector<SentimentLabel> a, b;
        for (std::size_t i = 0; i < n; ++i) {
            a.push_back(label_at(rng.uniform_index(3)));
            b.push_back(rng.uniform01() < 0.6 ? a.back() : label_at(rng.uniform_index(3)));
        }
        const auto k = cohens_kappa(a, b);
        if (k.degenerate) continue;
        CHECK(cohens_kappa(b, a).kappa == doctest::Approx(k.kappa).epsilon(1e-12));
        CHECK(cohens_kappa(k.agreement).kappa == k.kappa);
        std::vector<std::size_t> perm(n);
        for (std::size_t i = 0; i < n; ++i) perm[i] = i;
        rng.shuffle(perm);
        std::vector<SentimentLabel> pa, pb;
        for (auto i : perm) {
            pa.push_back(a[i]);
            pb.push_back(b[i]);
        }
        CHECK(cohens_kappa(pa, pb).kappa == doctest::Approx(k.kappa).epsilon(1e-12));
        std::array<std::array<double, 3>, 3> m{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m[i][j] = static_cast<double>(k.agreement[i][j]);
        CHECK(std::abs(oracle::kappa(m) - k.kappa) < 1e-9);
        std::size_t total = 0;
        for (const auto& row : k.agreement)
            for (auto v : row) total += v;
        CHECK(total == n);
    }
}

TEST_CASE("labeled review JSON round trip") {
    LabeledReview r{clean("a", 5), P, N, 0.25};
    const auto back = labeled_review_from_json(to_json(r));
    CHECK(back.review == r.review);
    CHECK(back.star_label == P);
    CHECK(back.model_label == N);
    CHECK(back.model_confidence == 0.25);
}
