#include "model_detail.hpp"
#include "revsent/error.hpp"
#include "revsent/rng.hpp"

#include <numeric>

namespace revsent::models {

namespace {

// w = (weights row, bias) for class c; bias acts as an extra feature fixed at 1.
double margin_of(std::span<const double> row, double bias, const SparseVector& x) {
    return x.dot(row) + bias;
}

double objective_of(std::span<const double> weights, const Scores& bias, std::size_t d, double lambda,
                    std::span<const SparseVector> X, std::span<const SentimentLabel> y) {
    double total = 0.0;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        auto row = weights.subspan(c * d, d);
        double sq = bias[c] * bias[c];
        for (double w : row) sq += w * w;
        double hinge = 0.0;
        for (std::size_t i = 0; i < X.size(); ++i) {
            const double target = index_of(y[i]) == c ? 1.0 : -1.0;
            hinge += std::max(0.0, 1.0 - target * margin_of(row, bias[c], X[i]));
        }
        total += 0.5 * lambda * sq + hinge / static_cast<double>(X.size());
    }
    return total;
}

}  // namespace

double svm_objective(const SVMModel& model, std::span<const SparseVector> X, std::span<const SentimentLabel> y) {
    require(X.size() == y.size() && !X.empty(), "svm_objective: bad data");
    return objective_of(model.weights, model.bias, model.dimension, model.params.lambda, X, y);
}

SVMModel train_svm(std::span<const SparseVector> X, std::span<const SentimentLabel> y, const SVMParams& params) {
    require(params.epochs >= 1, "train_svm: epochs must be at least 1");
    require(params.lambda > 0.0, "train_svm: lambda must be positive");
    const std::size_t d = detail::check_training_set(X, y, "train_svm");
    require(detail::distinct_classes(y) >= 2, "train_svm: need at least two classes");

    // Pegasos with eta_t = 1/(lambda t). Writing w_{t+1} = z_{t+1} / t turns
    // the shrink-and-step update into z += (1/lambda) y x on margin
    // violations, so each step touches only the sample's nonzeros. The
    // average of w over the final half of steps is kept lazily:
    //   sum_{t in S} z_{t+1} / t = H z_T - sum_u delta_u H_{<u}
    // with H the running sum of 1/t over S.
    const std::size_t n = X.size();
    const std::size_t stride = d + 1;  // last slot is the bias
    const std::size_t total_steps = params.epochs * n;
    const std::size_t avg_from = total_steps / 2 + 1;  // first averaged step
    const double inv_lambda = 1.0 / params.lambda;

    std::vector<double> z(kNumClasses * stride, 0.0);
    std::vector<double> acc(kNumClasses * stride, 0.0);
    double harmonic = 0.0;

    SVMModel model;
    model.params = params;
    model.dimension = d;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(params.seed);
    std::size_t t = 0;
    std::vector<double> current(kNumClasses * d);
    for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t i : order) {
            ++t;
            const bool averaging = t >= avg_from;
            const auto& x = X[i];
            for (std::size_t c = 0; c < kNumClasses; ++c) {
                double* zc = &z[c * stride];
                const double target = index_of(y[i]) == c ? 1.0 : -1.0;
                bool violated = true;
                if (t > 1) {
                    double s = zc[d];
                    for (const auto& e : x.entries) s += zc[e.index] * e.value;
                    violated = target * s / static_cast<double>(t - 1) < 1.0;
                }
                if (!violated) continue;
                const double step = target * inv_lambda;
                double* ac = &acc[c * stride];
                for (const auto& e : x.entries) {
                    zc[e.index] += step * e.value;
                    if (averaging) ac[e.index] += step * e.value * harmonic;
                }
                zc[d] += step;
                if (averaging) ac[d] += step * harmonic;
            }
            if (averaging) harmonic += 1.0 / static_cast<double>(t);
        }
        Scores current_bias{};
        for (std::size_t c = 0; c < kNumClasses; ++c) {
            for (std::size_t f = 0; f < d; ++f) current[c * d + f] = z[c * stride + f] / static_cast<double>(t);
            current_bias[c] = z[c * stride + d] / static_cast<double>(t);
        }
        model.epoch_objective.push_back(objective_of(current, current_bias, d, params.lambda, X, y));
    }

    const double count = static_cast<double>(total_steps - avg_from + 1);
    model.weights.assign(kNumClasses * d, 0.0);
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        for (std::size_t f = 0; f < d; ++f) {
            model.weights[c * d + f] = (harmonic * z[c * stride + f] - acc[c * stride + f]) / count;
        }
        model.bias[c] = (harmonic * z[c * stride + d] - acc[c * stride + d]) / count;
    }
    return model;
}

Scores SVMModel::scores(const SparseVector& x) const {
    Scores s{};
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        s[c] = margin_of(std::span<const double>(weights).subspan(c * dimension, dimension), bias[c], x);
    }
    return s;
}

}  // namespace revsent::models
