#include "revsent/corpus.hpp"
#include "revsent/error.hpp"

#include "support/synthetic.hpp"

#include <doctest.h>

#include <set>
#include <sstream>

using namespace revsent;
using namespace revsent::corpus;

namespace {

StopWords shipped() { return StopWords::load(std::filesystem::path(REVSENT_DATA_DIR) / "stopwords"); }

RawReview raw(std::string id, std::string app, std::string text, int rating) {
    RawReview r;
    r.review_id = std::move(id);
    r.app_id = std::move(app);
    r.text = std::move(text);
    r.rating = rating;
    r.posted_at = *parse_rfc3339("2023-01-05T00:00:00Z");
    return r;
}

}  // namespace

TEST_CASE("parse_reviews maps fields and rejects bad lines") {
    std::istringstream in(
        R"({"review_id":"r1","app_id":"sonali","text":"Great app","rating":5,"posted_at":"2023-01-05T00:00:00Z","thumbs_up":3})"
        "\n"
        R"({"review_id":"r2","app_id":"sonali","text":"x","rating":0,"posted_at":"2023-01-05T00:00:00Z","thumbs_up":0})"
        "\n"
        "not json\n"
        R"({"review_id":"r3","app_id":"sonali","text":"x","rating":2,"posted_at":"2023-01-05T00:00:00Z"})"
        "\n"
        R"({"review_id":"r4","app_id":"sonali","text":"x","rating":2,"posted_at":"2023-01-05T00:00:00Z","thumbs_up":-1})"
        "\n"
        R"({"review_id":"r1","app_id":"sonali","text":"y","rating":2,"posted_at":"2023-01-05T00:00:00Z","thumbs_up":1})"
        "\n");
    auto res = parse_reviews(in);
    REQUIRE(res.reviews.size() == 1);
    CHECK(res.reviews[0].review_id == "r1");
    CHECK(res.reviews[0].rating == 5);
    CHECK(res.reviews[0].thumbs_up == 3);
    CHECK_FALSE(res.reviews[0].app_version.has_value());
    REQUIRE(res.rejects.size() == 5);
    CHECK(res.rejects[0].review_id == "r2");
    CHECK(res.rejects[0].reason == "rating out of range");
    CHECK(res.rejects[1].reason == "malformed JSON");
    CHECK(res.rejects[2].reason == "missing field thumbs_up");
    CHECK(res.rejects[3].reason == "thumbs_up is negative");
    CHECK(res.rejects[4].reason == "duplicate review_id");
}

TEST_CASE("parse_reviews: empty stream, app filter, missing file") {
    std::istringstream empty("");
    auto res = parse_reviews(empty);
    CHECK(res.reviews.empty());
    CHECK(res.rejects.empty());

    std::istringstream in(
        R"({"review_id":"r1","app_id":"other","text":"Great app","rating":5,"posted_at":"2023-01-05T00:00:00Z","thumbs_up":3})");
    const std::vector<std::string> apps{"sonali"};
    auto filtered = parse_reviews(in, apps);
    CHECK(filtered.reviews.empty());
    REQUIRE(filtered.rejects.size() == 1);
    CHECK(filtered.rejects[0].reason == "unknown app_id");

    CHECK_THROWS_AS(parse_reviews_file("/nonexistent/dump.jsonl"), IoError);
}

TEST_CASE("dedupe keeps the first occurrence of (app, text, rating)") {
    std::vector<RawReview> v{raw("a", "s", "good app", 5), raw("b", "s", "good app", 5), raw("c", "s", "good app", 4),
                             raw("d", "t", "good app", 5)};
    std::vector<DropEntry> drops;
    auto kept = dedupe(v, &drops);
    REQUIRE(kept.size() == 3);
    CHECK(kept[0].review_id == "a");
    CHECK(kept[1].review_id == "c");
    CHECK(kept[2].review_id == "d");
    REQUIRE(drops.size() == 1);
    CHECK(drops[0].review_id == "b");
    CHECK(drops[0].stage == "duplicate");

    std::vector<RawReview> one{raw("a", "s", "x y", 3)};
    CHECK(dedupe(one).size() == 1);
}

TEST_CASE("detect_language by script composition") {
    CHECK(detect_language("অ্যাপটি ভালো") == LanguageTag::Bangla);
    CHECK(detect_language("good app but slow") == LanguageTag::English);
    CHECK(detect_language("👍👍 🙏") == LanguageTag::Other);
    CHECK(detect_language("") == LanguageTag::Other);
    // 3 Bangla code points of 10 letters: exactly at the threshold.
    CHECK(detect_language("abcdefg অআই") == LanguageTag::Bangla);
    CHECK(detect_language("abcdefgh অআ") == LanguageTag::English);
    CorpusConfig strict;
    strict.english_threshold = 0.9;
    CHECK(detect_language("abcdefgh অআ", strict) == LanguageTag::Other);
}

TEST_CASE("normalize_text order: lowercase, URL, emoji, collapse, stop words") {
    const auto sw = shipped();
    CHECK_FALSE(sw.contains(LanguageTag::English, "visit"));
    CHECK(sw.contains(LanguageTag::English, "the"));
    CHECK_FALSE(sw.contains(LanguageTag::English, "not"));
    // "visit" survives because it is not a stop word.
    CHECK(normalize_text("Great APP!!! visit http://x.co", LanguageTag::English, sw) == "great app visit");
    CHECK(normalize_text("the the the", LanguageTag::English, sw) == "");
    CHECK(normalize_text("", LanguageTag::English, sw) == "");
    CHECK(normalize_text("Love it 😍❤️ www.bank.com/login now", LanguageTag::English, sw) == "love");
    CHECK(normalize_text("not good 👨‍👩‍👧", LanguageTag::English, sw) == "not good");
    CHECK(normalize_text("আমি অ্যাপটি খুব পছন্দ করি", LanguageTag::Bangla, sw) == "অ্যাপটি পছন্দ");
    CHECK_THROWS_AS(normalize_text("x", LanguageTag::Other, sw), ContractViolation);
}

TEST_CASE("normalize_text is idempotent") {
    const auto sw = shipped();
    auto corpus = testing::planted_corpus(200, 7).reviews;
    for (const auto& r : corpus) {
        const auto lang = detect_language(r.text);
        if (lang == LanguageTag::Other) continue;
        const auto once = normalize_text(r.text, lang, sw);
        CHECK(normalize_text(once, lang, sw) == once);
    }
}

TEST_CASE("build_corpus composes the stages and reconciles") {
    const auto sw = shipped();
    std::vector<RawReview> v{raw("r1", "s", "good app but slow", 2), raw("r2", "s", "good app but slow", 2),
                             raw("r3", "s", "👍👍 🙏", 5), raw("r4", "s", "the the the", 3),
                             raw("r5", "s", "অ্যাপটি ভালো লাগে", 5)};
    auto b = build_corpus(v, {}, sw);
    REQUIRE(b.reviews.size() == 2);
    CHECK(b.drops.size() == 3);
    CHECK(b.reviews[0].raw.review_id == "r1");
    CHECK(b.reviews[1].language == LanguageTag::Bangla);
    std::set<std::string> dropped;
    for (const auto& d : b.drops) dropped.insert(d.review_id);
    CHECK(dropped == std::set<std::string>{"r2", "r3", "r4"});
    CHECK(b.stats.total.raw_count == 5);
    CHECK(b.stats.total.clean_count == 2);
    REQUIRE(b.stats.total.avg_rating.has_value());
    CHECK(*b.stats.total.avg_rating == doctest::Approx(3.5));
}

TEST_CASE("build_corpus: all-clean input keeps everything; invariants over a synthetic corpus") {
    const auto sw = shipped();
    auto synth = testing::planted_corpus(300, 11);
    auto b = build_corpus(synth.reviews, {}, sw);
    CHECK(b.reviews.size() == synth.reviews.size());
    CHECK(b.drops.empty());
    CHECK(b.stats.total.clean_count == b.stats.total.raw_count);
    std::size_t sum = 0;
    for (const auto& a : b.stats.apps) {
        CHECK(a.clean_count <= a.bilingual_count);
        CHECK(a.bilingual_count <= a.deduplicated_count);
        CHECK(a.deduplicated_count <= a.raw_count);
        CHECK(a.english_count + a.bangla_count == a.clean_count);
        sum += a.raw_count;
    }
    CHECK(sum == b.stats.total.raw_count);
    for (const auto& r : b.reviews) {
        CHECK(r.language != LanguageTag::Other);
        CHECK_FALSE(r.normalized_text.empty());
    }
    auto again = build_corpus(synth.reviews, {}, sw);
    CHECK(again.reviews == b.reviews);
    CHECK(format_stats_table(again.stats) == format_stats_table(b.stats));
}

TEST_CASE("funnel fixture reconciles exactly") {
    const auto f = testing::funnel_fixture(3);
    REQUIRE(f.reviews.size() == 200);
    auto b = build_corpus(f.reviews, {}, shipped());
    CHECK(b.reviews.size() == f.expected_clean);
    CHECK(b.reviews.size() + b.drops.size() == f.reviews.size());
}

TEST_CASE("clean review JSON round trip") {
    const auto sw = shipped();
    auto synth = testing::planted_corpus(20, 5);
    auto b = build_corpus(synth.reviews, {}, sw);
    for (const auto& r : b.reviews) CHECK(clean_review_from_json(to_json(r)) == r);
}
