#include "synthetic.hpp"

#include "revsent/io.hpp"
#include "revsent/model_client.hpp"
#include "revsent/rng.hpp"

#include <array>
#include <chrono>
#include <set>

#include <json.hpp>

namespace revsent::testing {

namespace {

using Words = std::vector<std::string>;

const std::array<Words, kNumClasses> kEnglishClassWords{{
    {"terrible", "awful", "useless", "horrible", "worst", "broken", "pathetic", "disappointing", "annoying",
     "garbage"},
    {"okay", "average", "decent", "moderate", "acceptable", "ordinary", "mediocre", "alright", "fair", "usual"},
    {"excellent", "love", "smooth", "wonderful", "amazing", "perfect", "brilliant", "fantastic", "reliable",
     "superb"},
}};

const std::array<Words, kNumClasses> kBanglaClassWords{{
    {"খারাপ", "বাজে", "জঘন্য", "বিরক্তিকর", "ভয়ংকর", "হতাশাজনক"},
    {"মোটামুটি", "চলনসই", "সাধারণ", "মাঝারি", "ঠিকঠাক", "গড়পড়তা"},
    {"চমৎকার", "ভালো", "দারুণ", "অসাধারণ", "সুন্দর", "প্রিয়"},
}};

const Words kEnglishFiller{"app", "bank", "account", "mobile", "wallet", "phone", "today", "month", "people",
                           "banking", "citizens", "government", "digital", "experience"};
const Words kBanglaFiller{"অ্যাপ", "ব্যাংক", "একাউন্ট", "মোবাইল", "আজ", "মাস", "মানুষ", "ডিজিটাল"};

// One cue per aspect, in aspect order.
const std::array<const char*, 6> kEnglishCues{"interface", "otp", "slow", "support", "update", "transfer"};
const std::array<const char*, 6> kBanglaCues{"ডিজাইন", "ওটিপি", "ধীর", "সেবা", "আপডেট", "লেনদেন"};

const std::array<const char*, 4> kApps{"agrani", "janata", "rupali", "sonali"};

const std::string& pick(const Words& w, Rng& rng) { return w[rng.uniform_index(w.size())]; }

SentimentLabel draw_class(std::size_t app, Rng& rng) {
    // Per-app class mix so rankings differ.
    static const std::array<std::array<double, 3>, 4> mix{{
        {0.55, 0.10, 0.35}, {0.65, 0.10, 0.25}, {0.30, 0.15, 0.55}, {0.40, 0.10, 0.50}}};
    const double u = rng.uniform01();
    if (u < mix[app][0]) return SentimentLabel::Negative;
    if (u < mix[app][0] + mix[app][1]) return SentimentLabel::Neutral;
    return SentimentLabel::Positive;
}

int rating_for(SentimentLabel c, Rng& rng) {
    switch (c) {
        case SentimentLabel::Negative: return 1 + static_cast<int>(rng.uniform_index(2));
        case SentimentLabel::Neutral: return 3;
        case SentimentLabel::Positive: return 4 + static_cast<int>(rng.uniform_index(2));
    }
    return 3;
}

std::string review_id(std::size_t i) {
    std::string s = std::to_string(i);
    return "r" + std::string(s.size() < 5 ? 5 - s.size() : 0, '0') + s;
}

}  // namespace

SyntheticCorpus planted_corpus(std::size_t n, std::uint64_t seed, double agreement, std::string model_id) {
    Rng rng(seed);
    SyntheticCorpus out;
    std::set<std::tuple<std::string, std::string, int>> seen;
    const auto start = std::chrono::sys_days{std::chrono::year{2023} / 1 / 1};
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t app = rng.uniform_index(kApps.size());
        const SentimentLabel c = draw_class(app, rng);
        const bool bangla = rng.uniform01() < 0.3;
        const auto& class_words = bangla ? kBanglaClassWords[index_of(c)] : kEnglishClassWords[index_of(c)];
        const auto& filler = bangla ? kBanglaFiller : kEnglishFiller;

        corpus::RawReview r;
        r.review_id = review_id(i + 1);
        r.app_id = kApps[app];
        r.rating = rating_for(c, rng);
        std::optional<Aspect> aspect;
        std::string text;
        do {
            Words words;
            const std::size_t n_class = 2 + rng.uniform_index(3);
            const std::size_t n_fill = 2 + rng.uniform_index(3);
            for (std::size_t k = 0; k < n_class; ++k) words.push_back(pick(class_words, rng));
            for (std::size_t k = 0; k < n_fill; ++k) words.push_back(pick(filler, rng));
            aspect.reset();
            if (rng.uniform01() < 0.5) {
                const std::size_t a = rng.uniform_index(kAllAspects.size());
                aspect = kAllAspects[a];
                words.push_back(bangla ? kBanglaCues[a] : kEnglishCues[a]);
            }
            rng.shuffle(words);
            text.clear();
            for (const auto& w : words) text += (text.empty() ? "" : " ") + w;
            if (!bangla && rng.uniform01() < 0.3) text[0] = static_cast<char>(std::toupper(text[0]));
            if (rng.uniform01() < 0.2) text += bangla ? "।" : "!";
        } while (!seen.insert({r.app_id, text, r.rating}).second);
        r.text = text;
        const auto day = start + std::chrono::days(rng.uniform_index(730));
        r.posted_at = std::chrono::sys_seconds(day) + std::chrono::seconds(rng.uniform_index(86400));
        r.thumbs_up = rng.uniform01() < 0.3 ? 0 : rng.uniform_index(40);
        const auto months = std::chrono::duration_cast<std::chrono::days>(day - start).count() / 30;
        r.app_version = "2." + std::to_string(months / 4);

        SentimentLabel model = c;
        if (rng.uniform01() >= agreement) {
            const std::size_t shift = 1 + rng.uniform_index(2);
            model = label_at((index_of(c) + shift) % kNumClasses);
        }
        const double conf = 0.5 + static_cast<double>(rng.uniform_index(500)) / 1000.0;
        out.model_labels.push_back({r.review_id, model, conf, model_id});
        if (aspect) {
            SentimentLabel polarity = c;
            if (rng.uniform01() < 0.1) polarity = SentimentLabel::Neutral;
            const double aconf = 0.6 + static_cast<double>(rng.uniform_index(400)) / 1000.0;
            out.absa.push_back({r.review_id, *aspect, polarity, aconf});
        }
        out.classes.push_back(c);
        out.reviews.push_back(std::move(r));
    }
    return out;
}

FunnelFixture funnel_fixture(std::uint64_t seed) {
    FunnelFixture f;
    auto base = planted_corpus(150, seed).reviews;
    Rng rng(derive_seed(seed, 1));
    std::size_t next_id = 1000;
    auto make = [&](const std::string& text, int rating) {
        corpus::RawReview r = base[rng.uniform_index(base.size())];
        r.review_id = "x" + std::to_string(next_id++);
        r.text = text;
        r.rating = rating;
        return r;
    };
    std::vector<corpus::RawReview> rows = base;
    const std::vector<std::string> foreign{"👍👍 🙏",       "😡😡😡",          "很好 的 应用",   "это ужасно",
                                           "رائع جدا",       "12345 67890",     "🙏🙏🙏 🙏",       "★★★★★",
                                           "बहुत अच्छा ऐप", "!!! ???",         "🔥🔥",            "αβγ δεζ",
                                           "100% 200%",      "شكرا جزيلا",     "ありがとう ございます"};
    for (std::size_t i = 0; i < foreign.size(); ++i) {
        rows.push_back(make(foreign[i], 1 + static_cast<int>(i % 5)));
        f.non_bilingual_ids.push_back(rows.back().review_id);
    }
    const std::vector<std::string> noisy{"good", "bad!!", "ok 👍", "nice", "wow http://spam.example/x?y=1",
                                         "ভালো", "বাজে।", "worst", "great 🔥🔥", "meh"};
    for (std::size_t i = 0; i < noisy.size(); ++i) {
        rows.push_back(make(noisy[i], 1 + static_cast<int>(i % 5)));
        f.noisy_ids.push_back(rows.back().review_id);
    }
    const std::vector<std::string> empty{"the the the", "is it the same", "THIS IS IT", "আমি এবং তুমি",
                                         "we were there"};
    for (std::size_t i = 0; i < empty.size(); ++i) {
        rows.push_back(make(empty[i], 1 + static_cast<int>(i % 5)));
        f.empty_ids.push_back(rows.back().review_id);
    }
    rng.shuffle(rows);
    // Each duplicate lands somewhere after its original.
    for (std::size_t k = 0; k < 20; ++k) {
        std::size_t src = 0;
        do {
            src = rng.uniform_index(rows.size());
        } while (rows[src].review_id.front() != 'r');
        corpus::RawReview dup = rows[src];
        dup.review_id = "d" + std::to_string(k);
        dup.thumbs_up += 1;
        const std::size_t at = src + 1 + rng.uniform_index(rows.size() - src);
        rows.insert(rows.begin() + static_cast<std::ptrdiff_t>(at), dup);
        f.duplicate_ids.push_back(dup.review_id);
    }
    f.reviews = std::move(rows);
    f.expected_clean = base.size();
    return f;
}

std::string to_jsonl(std::span<const corpus::RawReview> reviews) {
    std::string s;
    for (const auto& r : reviews) s += corpus::to_json(r).dump() + "\n";
    return s;
}

std::string to_jsonl(std::span<const ModelLabelRecord> records) {
    std::string s;
    for (const auto& r : records) s += client::to_json(r).dump() + "\n";
    return s;
}

std::string to_jsonl(std::span<const AspectPolarityRecord> records) {
    std::string s;
    for (const auto& r : records) s += client::to_json(r).dump() + "\n";
    return s;
}

std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("revsent-test-" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace revsent::testing
