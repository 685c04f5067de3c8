#pragma once

// Brute-force reference computations used to cross-check the library. They
// share no code with src/: dense arithmetic, direct formulas, quadrature.

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace revsent::oracle {

using Dense = std::vector<double>;

// TF-IDF with unigram+bigram counting, smoothed idf, sublinear tf and L2
// norm. Vocabulary order is by document frequency descending then byte order.
struct TfIdf {
    std::vector<std::string> terms;
    std::vector<double> idf;
    std::vector<Dense> rows;  // transformed training documents
};
TfIdf tfidf(const std::vector<std::vector<std::string>>& docs, std::size_t ngram_min, std::size_t ngram_max,
            std::size_t max_features);
Dense tfidf_row(const std::vector<std::string>& doc, const TfIdf& model, std::size_t ngram_min,
                std::size_t ngram_max);

// Multinomial NB posteriors computed as products of powers, then normalized.
std::vector<std::array<double, 3>> nb_log_posteriors(const std::vector<Dense>& X_train,
                                                     const std::vector<int>& y_train,
                                                     const std::vector<Dense>& X_query, double alpha);

// Cohen's kappa straight from the definition on a 3x3 count matrix.
double kappa(const std::array<std::array<double, 3>, 3>& m);

// Chi-square(1) upper tail via adaptive Simpson on the density after the
// substitution x = u^2 (which removes the endpoint singularity).
double chi2_sf_1df(double x);

}  // namespace revsent::oracle
