#include "model_detail.hpp"
#include "revsent/error.hpp"

#include <cmath>
#include <limits>

namespace revsent::models {

NBModel train_nb(std::span<const SparseVector> X, std::span<const SentimentLabel> y, const NBParams& params) {
    require(params.alpha > 0.0, "train_nb: alpha must be positive");
    const std::size_t d = detail::check_training_set(X, y, "train_nb");

    NBModel model;
    model.params = params;
    model.dimension = d;
    std::array<std::size_t, kNumClasses> class_count{};
    std::array<std::vector<double>, kNumClasses> mass;
    std::array<double, kNumClasses> total{};
    for (auto& m : mass) m.assign(d, 0.0);
    for (std::size_t i = 0; i < X.size(); ++i) {
        const std::size_t c = index_of(y[i]);
        ++class_count[c];
        for (const auto& e : X[i].entries) {
            mass[c][e.index] += e.value;
            total[c] += e.value;
        }
    }
    const double n = static_cast<double>(X.size());
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        model.log_prior[c] = class_count[c] > 0 ? std::log(static_cast<double>(class_count[c]) / n)
                                                : -std::numeric_limits<double>::infinity();
        const double denom = total[c] + params.alpha * static_cast<double>(d);
        auto& ll = model.log_likelihood[c];
        ll.resize(d);
        for (std::size_t f = 0; f < d; ++f) ll[f] = std::log((mass[c][f] + params.alpha) / denom);
    }
    return model;
}

Scores NBModel::scores(const SparseVector& x) const {
    Scores joint{};
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        joint[c] = log_prior[c];
        if (std::isinf(joint[c])) continue;
        for (const auto& e : x.entries) joint[c] += e.value * log_likelihood[c][e.index];
        best = std::max(best, joint[c]);
    }
    double sum = 0.0;
    for (double v : joint) {
        if (!std::isinf(v)) sum += std::exp(v - best);
    }
    const double log_norm = best + std::log(sum);
    for (auto& v : joint) {
        if (!std::isinf(v)) v -= log_norm;
    }
    return joint;
}

}  // namespace revsent::models
