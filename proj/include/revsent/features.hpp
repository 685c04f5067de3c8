#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace revsent::features {

using TokenList = std::vector<std::string>;

// Whitespace/punctuation split of already-normalized text; only tokens with
// at least one Latin or Bangla letter survive.
TokenList tokenize(std::string_view normalized_text);

struct FeatureConfig {
    std::size_t ngram_min = 1;
    std::size_t ngram_max = 2;
    std::size_t max_features = 15000;  // 0 means unlimited
};

// All n-grams for n in [ngram_min, ngram_max]; n-gram parts are joined by a
// single space.
std::vector<std::string> ngrams(const TokenList& tokens, const FeatureConfig& config);

struct SparseEntry {
    std::uint32_t index = 0;
    double value = 0.0;

    bool operator==(const SparseEntry&) const = default;
};

// Strictly increasing indices, positive values.
struct SparseVector {
    std::vector<SparseEntry> entries;
    std::size_t dimension = 0;

    double get(std::uint32_t index) const;
    double dot(std::span<const double> dense) const;
    double norm() const;
    bool operator==(const SparseVector&) const = default;
};

struct Term {
    std::string text;
    std::size_t doc_freq = 0;
    double idf = 0.0;

    bool operator==(const Term&) const = default;
};

class Vocabulary {
public:
    Vocabulary() = default;

    // Column i holds terms()[i]. Columns follow the df ranking.
    const std::vector<Term>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    std::size_t n_docs() const { return n_docs_; }
    const FeatureConfig& config() const { return config_; }

    // Column of term, or -1 when out of vocabulary.
    std::int64_t index_of(std::string_view term) const;

    std::string serialize() const;
    static Vocabulary deserialize(std::string_view data);
    void save(const std::filesystem::path& path) const;
    static Vocabulary load(const std::filesystem::path& path);

    bool operator==(const Vocabulary& other) const {
        return n_docs_ == other.n_docs_ && terms_ == other.terms_ &&
               config_.ngram_min == other.config_.ngram_min && config_.ngram_max == other.config_.ngram_max &&
               config_.max_features == other.config_.max_features;
    }

private:
    friend Vocabulary fit_vocabulary(std::span<const TokenList> docs, const FeatureConfig& config);
    void build_index();

    std::vector<Term> terms_;
    std::map<std::string, std::size_t, std::less<>> index_;
    std::size_t n_docs_ = 0;
    FeatureConfig config_;
};

// Candidates ranked by document frequency (descending), ties by byte-wise
// term order; top max_features kept. idf = ln((1 + N) / (1 + df)) + 1.
// Throws FitError when every document is empty.
Vocabulary fit_vocabulary(std::span<const TokenList> docs, const FeatureConfig& config);

// Sublinear tf (1 + ln c) times idf, then L2 normalized. OOV terms ignored;
// no overlap yields an all-zero vector.
SparseVector transform(const TokenList& doc, const Vocabulary& vocab);
std::vector<SparseVector> transform_all(std::span<const TokenList> docs, const Vocabulary& vocab);

}  // namespace revsent::features
