#include "model_detail.hpp"
#include "revsent/error.hpp"

#include <algorithm>
#include <cmath>

namespace revsent::models {

namespace {

Scores softmax(const Scores& z) {
    const double m = std::max({z[0], z[1], z[2]});
    Scores p{};
    double s = 0.0;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        p[c] = std::exp(z[c] - m);
        s += p[c];
    }
    for (auto& v : p) v /= s;
    return p;
}

Scores linear_scores(std::span<const double> theta, std::size_t d, const SparseVector& x) {
    Scores z{};
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        z[c] = theta[kNumClasses * d + c] + x.dot(theta.subspan(c * d, d));
    }
    return z;
}

}  // namespace

double logreg_objective(std::span<const double> theta, std::span<const SparseVector> X,
                        std::span<const SentimentLabel> y, double lambda, std::span<double> gradient) {
    require(!X.empty() && X.size() == y.size(), "logreg_objective: bad training set");
    const std::size_t d = X[0].dimension;
    require(theta.size() == kNumClasses * (d + 1), "logreg_objective: parameter size mismatch");
    const bool want_grad = !gradient.empty();
    if (want_grad) {
        require(gradient.size() == theta.size(), "logreg_objective: gradient size mismatch");
        std::fill(gradient.begin(), gradient.end(), 0.0);
    }
    const double inv_n = 1.0 / static_cast<double>(X.size());
    double loss = 0.0;
    for (std::size_t i = 0; i < X.size(); ++i) {
        const Scores z = linear_scores(theta, d, X[i]);
        const double m = std::max({z[0], z[1], z[2]});
        double s = 0.0;
        for (double v : z) s += std::exp(v - m);
        const std::size_t yi = index_of(y[i]);
        loss += (m + std::log(s)) - z[yi];
        if (want_grad) {
            for (std::size_t c = 0; c < kNumClasses; ++c) {
                const double r = (std::exp(z[c] - m) / s - (c == yi ? 1.0 : 0.0)) * inv_n;
                for (const auto& e : X[i].entries) gradient[c * d + e.index] += r * e.value;
                gradient[kNumClasses * d + c] += r;
            }
        }
    }
    double sq = 0.0;
    for (std::size_t k = 0; k < kNumClasses * d; ++k) {
        sq += theta[k] * theta[k];
        if (want_grad) gradient[k] += lambda * theta[k];
    }
    return loss * inv_n + 0.5 * lambda * sq;
}

LRModel train_logreg(std::span<const SparseVector> X, std::span<const SentimentLabel> y, const LRParams& params) {
    const std::size_t d = detail::check_training_set(X, y, "train_logreg");
    require(detail::distinct_classes(y) >= 2, "train_logreg: need at least two classes");
    require(params.lambda >= 0.0 && params.initial_step > 0.0, "train_logreg: bad parameters");

    const std::size_t size = kNumClasses * (d + 1);
    std::vector<double> theta(size, 0.0), grad(size), trial(size);
    double f = logreg_objective(theta, X, y, params.lambda, grad);
    auto norm = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x * x;
        return std::sqrt(s);
    };
    double gnorm = norm(grad);
    double step = params.initial_step;
    constexpr double kArmijo = 1e-4;
    constexpr double kMinStep = 1e-12;

    std::size_t iter = 0;
    while (iter < params.max_iters && gnorm >= params.tol) {
        // Backtracking line search: halve until the Armijo condition holds.
        bool accepted = false;
        while (step >= kMinStep) {
            for (std::size_t k = 0; k < size; ++k) trial[k] = theta[k] - step * grad[k];
            const double f_trial = logreg_objective(trial, X, y, params.lambda);
            if (f_trial <= f - kArmijo * step * gnorm * gnorm) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
        theta.swap(trial);
        f = logreg_objective(theta, X, y, params.lambda, grad);
        gnorm = norm(grad);
        ++iter;
        step = std::min(step * 2.0, 1e6);
    }

    LRModel model;
    model.params = params;
    model.dimension = d;
    model.weights.assign(theta.begin(), theta.begin() + static_cast<std::ptrdiff_t>(kNumClasses * d));
    for (std::size_t c = 0; c < kNumClasses; ++c) model.bias[c] = theta[kNumClasses * d + c];
    model.iterations = iter;
    model.final_objective = f;
    model.final_gradient_norm = gnorm;
    return model;
}

Scores LRModel::scores(const SparseVector& x) const {
    Scores z{};
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        z[c] = bias[c] + x.dot(std::span<const double>(weights).subspan(c * dimension, dimension));
    }
    return softmax(z);
}

}  // namespace revsent::models
