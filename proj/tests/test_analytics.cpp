#include "revsent/analytics.hpp"
#include "revsent/corpus.hpp"
#include "revsent/error.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace revsent;
using namespace revsent::analytics;

namespace {

constexpr auto N = SentimentLabel::Negative;
constexpr auto U = SentimentLabel::Neutral;
constexpr auto P = SentimentLabel::Positive;

ScoredReview sr(SentimentLabel l, std::uint64_t thumbs, int rating = 3, std::string app = "a") {
    return {std::move(app), l, thumbs, rating};
}

AppSentimentProfile profile(std::string app, std::optional<double> pss, double avg) {
    AppSentimentProfile p;
    p.app_id = std::move(app);
    p.pss = pss;
    p.avg_rating = avg;
    return p;
}

corpus::CleanReview clean(std::string id, std::string normalized) {
    corpus::CleanReview r;
    r.raw.review_id = std::move(id);
    r.raw.app_id = "a";
    r.raw.rating = 3;
    r.language = LanguageTag::English;
    r.normalized_text = std::move(normalized);
    return r;
}

}  // namespace

TEST_CASE("weighted scores: hand example and degenerate weights") {
    std::vector<ScoredReview> v{sr(P, 3, 5), sr(P, 0, 4), sr(N, 1, 1), sr(U, 0, 3)};
    auto p = weighted_scores(v);
    CHECK(p.total_weight == 4);
    CHECK(*p.pss == doctest::Approx(75.0));
    CHECK(*p.nss == doctest::Approx(25.0));
    CHECK(*p.neutral_share == doctest::Approx(0.0));
    CHECK(p.avg_rating == doctest::Approx(3.25));
    CHECK_FALSE(p.degenerate);

    std::vector<ScoredReview> pos{sr(P, 2), sr(P, 9)};
    CHECK(*weighted_scores(pos).pss == 100.0);

    std::vector<ScoredReview> zero{sr(P, 0), sr(N, 0)};
    auto z = weighted_scores(zero);
    CHECK(z.degenerate);
    CHECK_FALSE(z.pss.has_value());
    CHECK_FALSE(z.nss.has_value());
    CHECK_FALSE(z.neutral_share.has_value());

    CHECK_THROWS_AS(weighted_scores(std::vector<ScoredReview>{}), ContractViolation);
}

TEST_CASE("weighted scores: order and zero-weight invariance") {
    std::vector<ScoredReview> v{sr(P, 3), sr(N, 7), sr(U, 2), sr(P, 5)};
    auto base = weighted_scores(v);
    CHECK(*base.pss + *base.nss + *base.neutral_share == doctest::Approx(100.0).epsilon(1e-12));
    std::reverse(v.begin(), v.end());
    auto rev = weighted_scores(v);
    CHECK(*rev.pss == *base.pss);
    v.push_back(sr(N, 0));
    v.push_back(sr(P, 0));
    auto extra = weighted_scores(v);
    CHECK(*extra.pss == *base.pss);
    CHECK(*extra.nss == *base.nss);
}

TEST_CASE("rank_apps ordering rules") {
    auto r = rank_apps({profile("agrani", 29.1, 3.06), profile("rupali", 58.4, 3.5), profile("janata", 16.3, 2.2),
                        profile("sonali", 52.8, 3.67)});
    std::vector<std::string> order;
    for (const auto& p : r) order.push_back(p.app_id);
    CHECK(order == std::vector<std::string>{"rupali", "sonali", "agrani", "janata"});

    CHECK(rank_apps({profile("x", 10.0, 1.0)}).size() == 1);

    auto nulls = rank_apps({profile("low", std::nullopt, 2.2), profile("high", std::nullopt, 3.5),
                            profile("scored", 1.0, 1.0)});
    CHECK(nulls[0].app_id == "scored");
    CHECK(nulls[1].app_id == "high");
    CHECK(nulls[2].app_id == "low");

    auto ties = rank_apps({profile("b", 50.0, 3.0), profile("a", 50.0, 3.0)});
    CHECK(ties[0].app_id == "a");
}

TEST_CASE("aspect cue detection") {
    AspectLexicon lex;
    lex.add(Aspect::SpeedPerformance, "slow");
    lex.add(Aspect::SpeedPerformance, "crashes");
    lex.add(Aspect::Security, "OTP");
    lex.add(Aspect::UiUx, "design");
    CHECK(detect_aspect_cues(clean("r", "app slow crashes"), lex) == std::vector<Aspect>{Aspect::SpeedPerformance});
    CHECK(detect_aspect_cues(clean("r", "otp design bad"), lex) == std::vector<Aspect>{Aspect::UiUx, Aspect::Security});
    CHECK(detect_aspect_cues(clean("r", "nothing relevant"), lex).empty());

    auto shipped = AspectLexicon::load(std::filesystem::path(REVSENT_DATA_DIR) / "aspects");
    for (Aspect a : kAllAspects) CHECK_FALSE(shipped.cues(a).empty());
    CHECK(shipped.cues(Aspect::SpeedPerformance).count("slow") == 1);
    CHECK(shipped.cues(Aspect::TransactionProcessing).count("লেনদেন") == 1);
}

TEST_CASE("aggregate_absa shares, salience and rejects") {
    ReviewIndex idx{{"r1", {"a", 4}}, {"r2", {"a", 0}}, {"r3", {"a", 6}}, {"r4", {"b", 1}}};
    std::vector<AspectPolarityRecord> recs{{"r1", Aspect::SpeedPerformance, N, 0.9},
                                           {"r2", Aspect::SpeedPerformance, N, 0.8},
                                           {"r3", Aspect::SpeedPerformance, P, 0.7},
                                           {"r4", Aspect::Security, U, 0.6},
                                           {"r9", Aspect::Security, U, 0.6},
                                           {"r1", Aspect::SpeedPerformance, P, 0.5}};
    auto t = aggregate_absa(recs, idx);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0].app_id == "a");
    CHECK(t.rows[0].mentions == 3);
    CHECK(t.rows[0].shares[index_of(N)] == doctest::Approx(66.6667).epsilon(1e-5));
    CHECK(t.rows[0].salience == 10);
    CHECK(t.rows[0].mean_confidence == doctest::Approx(0.8));
    CHECK(t.rows[1].app_id == "b");
    for (const auto& row : t.rows) {
        CHECK(row.shares[0] + row.shares[1] + row.shares[2] == doctest::Approx(100.0).epsilon(1e-9));
    }
    REQUIRE(t.rejects.size() == 2);
    CHECK(t.rejects[0].reason == "unknown review_id");
    CHECK(t.rejects[1].reason == "duplicate (review, aspect) record");
    CHECK(aspect_tsv(t).rfind("app_id\taspect\tmetric\tvalue\n", 0) == 0);
}

TEST_CASE("monthly trends") {
    auto at = [](const char* ts) { return *parse_rfc3339(ts); };
    std::vector<TrendReview> v{
        {"a", at("2023-02-03T00:00:00Z"), P, "1.0"}, {"a", at("2023-02-10T00:00:00Z"), P, "1.0"},
        {"a", at("2023-02-11T00:00:00Z"), N, "1.0"}, {"a", at("2023-02-20T00:00:00Z"), N, "1.0"},
        {"a", at("2023-04-02T00:00:00Z"), N, "2.0"}, {"b", at("2023-04-05T00:00:00Z"), U, std::nullopt},
    };
    auto t = monthly_trends(v);
    REQUIRE(t.series.size() == 3);
    CHECK(t.series[0].name == "overall");
    CHECK(t.series[1].name == "a");
    const auto& a = t.series[1].points;
    REQUIRE(a.size() == 3);
    CHECK(a[0].month.str() == "2023-02");
    CHECK(a[0].proportions[index_of(P)] == 0.5);
    CHECK(a[0].proportions[index_of(U)] == 0.0);
    CHECK(a[0].proportions[index_of(N)] == 0.5);
    CHECK(a[1].total == 0);
    CHECK(a[2].version_change);
    CHECK_FALSE(a[1].version_change);
    std::size_t total = 0;
    for (const auto& p : t.series[0].points) {
        total += p.total;
        if (p.total > 0) CHECK(std::abs(p.proportions[0] + p.proportions[1] + p.proportions[2] - 1.0) < 1e-9);
    }
    CHECK(total == v.size());

    std::vector<TrendReview> one{{"a", at("2024-05-05T00:00:00Z"), N, std::nullopt}};
    auto single = monthly_trends(one);
    REQUIRE(single.series[0].points.size() == 1);
    CHECK(single.series[0].points[0].proportions[index_of(N)] == 1.0);
}
