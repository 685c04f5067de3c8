#include "revsent/error.hpp"
#include "revsent/models.hpp"
#include "model_detail.hpp"

#include <cmath>

namespace revsent::models {

using nlohmann::json;

std::size_t argmax(const Scores& scores) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < kNumClasses; ++c) {
        if (scores[c] > scores[best]) best = c;
    }
    return best;
}

std::string_view to_string(Family family) {
    switch (family) {
        case Family::NaiveBayes: return "nb";
        case Family::LogisticRegression: return "lr";
        case Family::LinearSvm: return "svm";
        case Family::RandomForest: return "rf";
    }
    return "";
}

std::string_view display_name(Family family) {
    switch (family) {
        case Family::NaiveBayes: return "Naive Bayes";
        case Family::LogisticRegression: return "Log. Reg.";
        case Family::LinearSvm: return "Linear SVM";
        case Family::RandomForest: return "Random Forest";
    }
    return "";
}

std::optional<Family> parse_family(std::string_view name) {
    for (Family f : {Family::NaiveBayes, Family::LogisticRegression, Family::LinearSvm, Family::RandomForest}) {
        if (to_string(f) == name) return f;
    }
    return std::nullopt;
}

Family family_of(const Params& p) {
    return std::visit(
        [](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, NBParams>) return Family::NaiveBayes;
            else if constexpr (std::is_same_v<T, LRParams>) return Family::LogisticRegression;
            else if constexpr (std::is_same_v<T, SVMParams>) return Family::LinearSvm;
            else return Family::RandomForest;
        },
        p);
}

Family family_of(const Model& m) {
    return std::visit(
        [](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, NBModel>) return Family::NaiveBayes;
            else if constexpr (std::is_same_v<T, LRModel>) return Family::LogisticRegression;
            else if constexpr (std::is_same_v<T, SVMModel>) return Family::LinearSvm;
            else return Family::RandomForest;
        },
        m);
}

std::size_t dimension_of(const Model& m) {
    return std::visit([](const auto& v) { return v.dimension; }, m);
}

json to_json(const Params& p) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, NBParams>) {
                return {{"family", "nb"}, {"alpha", v.alpha}};
            } else if constexpr (std::is_same_v<T, LRParams>) {
                return {{"family", "lr"}, {"lambda", v.lambda}, {"max_iters", v.max_iters}, {"tol", v.tol},
                        {"initial_step", v.initial_step}};
            } else if constexpr (std::is_same_v<T, SVMParams>) {
                return {{"family", "svm"}, {"lambda", v.lambda}, {"epochs", v.epochs}, {"seed", v.seed}};
            } else {
                return {{"family", "rf"}, {"n_trees", v.n_trees}, {"max_depth", v.max_depth},
                        {"min_leaf", v.min_leaf}, {"features_per_split", v.features_per_split},
                        {"bootstrap", v.bootstrap}, {"seed", v.seed}};
            }
        },
        p);
}

Model train(const Params& params, std::span<const SparseVector> X, std::span<const SentimentLabel> y) {
    return std::visit(
        [&](const auto& p) -> Model {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, NBParams>) return train_nb(X, y, p);
            else if constexpr (std::is_same_v<T, LRParams>) return train_logreg(X, y, p);
            else if constexpr (std::is_same_v<T, SVMParams>) return train_svm(X, y, p);
            else return train_rf(X, y, p);
        },
        params);
}

Prediction predict(const Model& model, std::span<const SparseVector> X) {
    const std::size_t d = dimension_of(model);
    Prediction out;
    out.labels.reserve(X.size());
    out.scores.reserve(X.size());
    for (const auto& x : X) {
        require(x.dimension == d, "predict: vector dimension " + std::to_string(x.dimension) +
                                      " does not match model dimension " + std::to_string(d));
        Scores s = std::visit([&](const auto& m) { return m.scores(x); }, model);
        out.labels.push_back(label_at(argmax(s)));
        out.scores.push_back(s);
    }
    return out;
}

namespace detail {

std::size_t check_training_set(std::span<const SparseVector> X, std::span<const SentimentLabel> y,
                               std::string_view who) {
    const std::string name(who);
    require(X.size() == y.size(), name + ": X and y differ in length");
    require(!X.empty(), name + ": empty training set");
    const std::size_t d = X[0].dimension;
    for (const auto& x : X) {
        require(x.dimension == d, name + ": inconsistent vector dimensions");
        for (const auto& e : x.entries) {
            require(std::isfinite(e.value), name + ": non-finite feature value");
            require(e.index < d, name + ": feature index out of range");
        }
    }
    return d;
}

std::size_t distinct_classes(std::span<const SentimentLabel> y) {
    std::array<bool, kNumClasses> seen{};
    for (auto l : y) seen[index_of(l)] = true;
    return static_cast<std::size_t>(seen[0]) + seen[1] + seen[2];
}

}  // namespace detail

}  // namespace revsent::models
