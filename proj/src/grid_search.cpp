#include "revsent/error.hpp"
#include "revsent/models.hpp"
#include "revsent/parallel.hpp"
#include "revsent/rng.hpp"
#include "revsent/stats.hpp"

namespace revsent::models {

using nlohmann::json;

namespace {

Params with_seed(Params p, std::uint64_t seed) {
    if (auto* svm = std::get_if<SVMParams>(&p)) svm->seed = seed;
    if (auto* rf = std::get_if<RFParams>(&p)) rf->seed = seed;
    return p;
}

// Macro F1 over the classes seen in the fold's truth or predictions.
double fold_objective(std::span<const SentimentLabel> truth, std::span<const SentimentLabel> pred) {
    const auto m = stats::classification_metrics(truth, pred).metrics;
    std::array<bool, kNumClasses> seen{};
    for (auto l : truth) seen[index_of(l)] = true;
    for (auto l : pred) seen[index_of(l)] = true;
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        if (!seen[c]) continue;
        sum += m.per_class[c].f1;
        ++n;
    }
    return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

}  // namespace

GridSearchResult grid_search(std::span<const Params> grid, std::span<const SparseVector> X,
                             std::span<const SentimentLabel> y, std::size_t k, std::uint64_t seed) {
    require(!grid.empty(), "grid_search: empty grid");
    require(k >= 2, "grid_search: k must be at least 2");
    require(X.size() == y.size() && X.size() >= k, "grid_search: need at least k samples");
    const Family family = family_of(grid[0]);
    for (const auto& p : grid) require(family_of(p) == family, "grid_search: mixed model families in grid");

    GridSearchResult result;
    result.family = family;
    result.folds = k;
    result.seed = seed;
    result.fold_of = stats::stratified_kfold(y, k, seed, &result.warnings);

    std::vector<std::vector<std::size_t>> train_idx(k), test_idx(k);
    for (std::size_t i = 0; i < X.size(); ++i) {
        for (std::size_t f = 0; f < k; ++f) (result.fold_of[i] == f ? test_idx : train_idx)[f].push_back(i);
    }

    result.candidates.resize(grid.size());
    for (std::size_t c = 0; c < grid.size(); ++c) {
        result.candidates[c].params = grid[c];
        result.candidates[c].fold_macro_f1.assign(k, 0.0);
    }
    parallel_for(grid.size() * k, [&](std::size_t task) {
        const std::size_t c = task / k;
        const std::size_t f = task % k;
        std::vector<SparseVector> Xtr, Xte;
        std::vector<SentimentLabel> ytr, yte;
        for (auto i : train_idx[f]) {
            Xtr.push_back(X[i]);
            ytr.push_back(y[i]);
        }
        for (auto i : test_idx[f]) {
            Xte.push_back(X[i]);
            yte.push_back(y[i]);
        }
        const Model model = train(with_seed(grid[c], derive_seed(seed, task)), Xtr, ytr);
        const Prediction pred = predict(model, Xte);
        result.candidates[c].fold_macro_f1[f] = fold_objective(yte, pred.labels);
    });

    for (std::size_t c = 0; c < grid.size(); ++c) {
        auto& cand = result.candidates[c];
        double sum = 0.0;
        for (double v : cand.fold_macro_f1) sum += v;
        cand.mean_macro_f1 = sum / static_cast<double>(k);
        if (cand.mean_macro_f1 > result.candidates[result.winner].mean_macro_f1) result.winner = c;
    }
    return result;
}

json to_json(const GridSearchResult& r) {
    json cands = json::array();
    for (const auto& c : r.candidates) {
        cands.push_back({{"params", to_json(c.params)}, {"fold_macro_f1", c.fold_macro_f1},
                         {"mean_macro_f1", c.mean_macro_f1}});
    }
    return json{{"family", std::string(to_string(r.family))},
                {"folds", r.folds},
                {"seed", r.seed},
                {"candidates", cands},
                {"winner", r.winner},
                {"warnings", r.warnings}};
}

}  // namespace revsent::models
