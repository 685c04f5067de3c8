#include "revsent/features.hpp"

#include "revsent/error.hpp"
#include "revsent/io.hpp"
#include "revsent/text.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace revsent::features {

TokenList tokenize(std::string_view normalized_text) {
    return text::split_tokens(normalized_text);
}

std::vector<std::string> ngrams(const TokenList& tokens, const FeatureConfig& config) {
    std::vector<std::string> out;
    for (std::size_t n = config.ngram_min; n <= config.ngram_max; ++n) {
        if (n == 0 || tokens.size() < n) continue;
        for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
            std::string gram = tokens[i];
            for (std::size_t k = 1; k < n; ++k) {
                gram.push_back(' ');
                gram += tokens[i + k];
            }
            out.push_back(std::move(gram));
        }
    }
    return out;
}

double SparseVector::get(std::uint32_t index) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), index,
                               [](const SparseEntry& e, std::uint32_t i) { return e.index < i; });
    return (it != entries.end() && it->index == index) ? it->value : 0.0;
}

double SparseVector::dot(std::span<const double> dense) const {
    double s = 0.0;
    for (const auto& e : entries) s += e.value * dense[e.index];
    return s;
}

double SparseVector::norm() const {
    double s = 0.0;
    for (const auto& e : entries) s += e.value * e.value;
    return std::sqrt(s);
}

std::int64_t Vocabulary::index_of(std::string_view term) const {
    auto it = index_.find(term);
    return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

void Vocabulary::build_index() {
    index_.clear();
    for (std::size_t i = 0; i < terms_.size(); ++i) index_.emplace(terms_[i].text, i);
}

Vocabulary fit_vocabulary(std::span<const TokenList> docs, const FeatureConfig& config) {
    require(config.ngram_min >= 1 && config.ngram_min <= config.ngram_max, "fit_vocabulary: bad ngram range");
    bool any = false;
    std::unordered_map<std::string, std::size_t> df;
    for (const auto& doc : docs) {
        if (!doc.empty()) any = true;
        std::unordered_set<std::string> seen;
        for (auto& g : ngrams(doc, config)) {
            if (seen.insert(g).second) ++df[g];
        }
    }
    if (!any) throw FitError("fit_vocabulary: every document is empty");

    std::vector<std::pair<std::string, std::size_t>> ranked(df.begin(), df.end());
    // char_traits<char>::lt compares as unsigned char, so ties fall back to
    // UTF-8 byte order.
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (config.max_features > 0 && ranked.size() > config.max_features) ranked.resize(config.max_features);

    Vocabulary vocab;
    vocab.config_ = config;
    vocab.n_docs_ = docs.size();
    const double n = static_cast<double>(docs.size());
    vocab.terms_.reserve(ranked.size());
    for (auto& [term, freq] : ranked) {
        const double idf = std::log((1.0 + n) / (1.0 + static_cast<double>(freq))) + 1.0;
        vocab.terms_.push_back({std::move(term), freq, idf});
    }
    vocab.build_index();
    return vocab;
}

SparseVector transform(const TokenList& doc, const Vocabulary& vocab) {
    std::map<std::uint32_t, std::size_t> counts;
    for (const auto& g : ngrams(doc, vocab.config())) {
        const auto idx = vocab.index_of(g);
        if (idx >= 0) ++counts[static_cast<std::uint32_t>(idx)];
    }
    SparseVector v;
    v.dimension = vocab.size();
    v.entries.reserve(counts.size());
    double sq = 0.0;
    for (const auto& [idx, c] : counts) {
        const double w = (1.0 + std::log(static_cast<double>(c))) * vocab.terms()[idx].idf;
        v.entries.push_back({idx, w});
        sq += w * w;
    }
    if (sq > 0.0) {
        const double inv = 1.0 / std::sqrt(sq);
        for (auto& e : v.entries) e.value *= inv;
    }
    return v;
}

std::vector<SparseVector> transform_all(std::span<const TokenList> docs, const Vocabulary& vocab) {
    std::vector<SparseVector> out;
    out.reserve(docs.size());
    for (const auto& d : docs) out.push_back(transform(d, vocab));
    return out;
}

namespace {
constexpr std::string_view kVocabMagic = "revsent-vocabulary v1";
}

std::string Vocabulary::serialize() const {
    std::ostringstream out;
    out << kVocabMagic << '\n'
        << "n_docs " << n_docs_ << '\n'
        << "ngram_min " << config_.ngram_min << '\n'
        << "ngram_max " << config_.ngram_max << '\n'
        << "max_features " << config_.max_features << '\n'
        << "terms " << terms_.size() << '\n';
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        out << terms_[i].text << '\t' << i << '\t' << terms_[i].doc_freq << '\t'
            << io::format_double(terms_[i].idf) << '\n';
    }
    return out.str();
}

namespace {

std::size_t header_value(std::istringstream& in, std::string_view key) {
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("vocabulary: truncated header");
    const auto sp = line.find(' ');
    if (sp == std::string::npos || std::string_view(line).substr(0, sp) != key) {
        throw ValidationError("vocabulary: expected header key " + std::string(key));
    }
    return static_cast<std::size_t>(std::stoull(line.substr(sp + 1)));
}

}  // namespace

Vocabulary Vocabulary::deserialize(std::string_view data) {
    std::istringstream in{std::string(data)};
    std::string line;
    if (!std::getline(in, line) || line != kVocabMagic) throw ValidationError("vocabulary: bad magic line");
    Vocabulary v;
    v.n_docs_ = header_value(in, "n_docs");
    v.config_.ngram_min = header_value(in, "ngram_min");
    v.config_.ngram_max = header_value(in, "ngram_max");
    v.config_.max_features = header_value(in, "max_features");
    const std::size_t count = header_value(in, "terms");
    v.terms_.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (!std::getline(in, line)) throw ValidationError("vocabulary: truncated term list");
        std::vector<std::string> cols;
        std::size_t start = 0;
        for (std::size_t pos; (pos = line.find('\t', start)) != std::string::npos; start = pos + 1) {
            cols.push_back(line.substr(start, pos - start));
        }
        cols.push_back(line.substr(start));
        if (cols.size() != 4 || std::stoull(cols[1]) != i) {
            throw ValidationError("vocabulary: malformed term line " + std::to_string(i));
        }
        v.terms_.push_back({cols[0], static_cast<std::size_t>(std::stoull(cols[2])), io::parse_double(cols[3])});
    }
    v.build_index();
    return v;
}

void Vocabulary::save(const std::filesystem::path& path) const { io::write_file(path, serialize()); }

Vocabulary Vocabulary::load(const std::filesystem::path& path) { return deserialize(io::read_file(path)); }

}  // namespace revsent::features
