#pragma once

#include "revsent/features.hpp"
#include "revsent/types.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace revsent::models {

using features::SparseVector;
using Scores = std::array<double, kNumClasses>;

// Highest score wins; ties go to the lower class index.
std::size_t argmax(const Scores& scores);

enum class Family { NaiveBayes, LogisticRegression, LinearSvm, RandomForest };

std::string_view to_string(Family family);     // "nb", "lr", "svm", "rf"
std::string_view display_name(Family family);  // "Naive Bayes", ...
std::optional<Family> parse_family(std::string_view name);

struct NBParams {
    double alpha = 1.0;
};

struct LRParams {
    double lambda = 1e-4;
    std::size_t max_iters = 1000;
    double tol = 1e-6;
    double initial_step = 1.0;
};

struct SVMParams {
    double lambda = 1e-4;
    std::size_t epochs = 20;
    std::uint64_t seed = 0;
};

struct RFParams {
    std::size_t n_trees = 100;
    std::size_t max_depth = 16;
    std::size_t min_leaf = 2;
    std::size_t features_per_split = 0;  // 0: floor(sqrt(dimension))
    bool bootstrap = true;
    std::uint64_t seed = 0;
};

using Params = std::variant<NBParams, LRParams, SVMParams, RFParams>;

Family family_of(const Params& p);
nlohmann::json to_json(const Params& p);

// Multinomial NB over TF-IDF mass with Laplace smoothing.
struct NBModel {
    NBParams params;
    std::size_t dimension = 0;
    Scores log_prior{};                          // -inf for classes absent in training
    std::array<std::vector<double>, kNumClasses> log_likelihood;  // per class, per feature

    // Normalized log posterior per class.
    Scores scores(const SparseVector& x) const;
};

struct LRModel {
    LRParams params;
    std::size_t dimension = 0;
    std::vector<double> weights;  // kNumClasses x dimension, row-major
    Scores bias{};
    std::size_t iterations = 0;
    double final_objective = 0.0;
    double final_gradient_norm = 0.0;

    // Softmax probabilities.
    Scores scores(const SparseVector& x) const;
};

struct SVMModel {
    SVMParams params;
    std::size_t dimension = 0;
    std::vector<double> weights;  // kNumClasses x dimension, row-major (averaged)
    Scores bias{};
    std::vector<double> epoch_objective;  // hinge + L2 of the current iterate after each epoch

    // One-vs-rest margins.
    Scores scores(const SparseVector& x) const;
};

struct TreeNode {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;     // x[feature] <= threshold goes left
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    std::array<std::uint32_t, kNumClasses> counts{};  // training samples reaching the node

    bool is_leaf() const { return feature < 0; }
};

struct DecisionTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    const TreeNode& leaf_for(const SparseVector& x) const;
    std::size_t depth() const;
};

struct RFModel {
    RFParams params;
    std::size_t dimension = 0;
    std::vector<DecisionTree> trees;

    // Fraction of trees voting for each class.
    Scores scores(const SparseVector& x) const;
};

using Model = std::variant<NBModel, LRModel, SVMModel, RFModel>;

Family family_of(const Model& m);
std::size_t dimension_of(const Model& m);

NBModel train_nb(std::span<const SparseVector> X, std::span<const SentimentLabel> y, const NBParams& params);
LRModel train_logreg(std::span<const SparseVector> X, std::span<const SentimentLabel> y, const LRParams& params);
SVMModel train_svm(std::span<const SparseVector> X, std::span<const SentimentLabel> y, const SVMParams& params);
RFModel train_rf(std::span<const SparseVector> X, std::span<const SentimentLabel> y, const RFParams& params);

Model train(const Params& params, std::span<const SparseVector> X, std::span<const SentimentLabel> y);

// Mean cross-entropy plus (lambda/2)||W||^2 at theta = [W row-major, bias].
// When gradient is non-empty it must have theta's size and receives the
// analytic gradient.
double logreg_objective(std::span<const double> theta, std::span<const SparseVector> X,
                        std::span<const SentimentLabel> y, double lambda, std::span<double> gradient = {});

// Sum over the three one-vs-rest problems of (lambda/2)||w_k||^2 + mean hinge.
double svm_objective(const SVMModel& model, std::span<const SparseVector> X, std::span<const SentimentLabel> y);

struct Prediction {
    std::vector<SentimentLabel> labels;
    std::vector<Scores> scores;
};

// Throws ContractViolation when a vector's dimension differs from the model's.
Prediction predict(const Model& model, std::span<const SparseVector> X);

// Flat-text serialization; doubles use shortest round-trip form.
std::string serialize(const Model& model);
Model deserialize(std::string_view data);
void save(const Model& model, const std::filesystem::path& path);
Model load(const std::filesystem::path& path);

struct CandidateResult {
    Params params;
    std::vector<double> fold_macro_f1;
    double mean_macro_f1 = 0.0;
};

struct GridSearchResult {
    Family family = Family::NaiveBayes;
    std::vector<CandidateResult> candidates;
    std::size_t winner = 0;
    std::size_t folds = 0;
    std::uint64_t seed = 0;
    std::vector<std::size_t> fold_of;  // fold id per training sample
    std::vector<std::string> warnings;
};

// Stratified k-fold search with a macro-F1 objective. Every candidate must
// belong to the same family. Seeds inside SVM/RF candidates are replaced by
// derive_seed(seed, candidate * k + fold). Ties go to the earliest candidate.
GridSearchResult grid_search(std::span<const Params> grid, std::span<const SparseVector> X,
                             std::span<const SentimentLabel> y, std::size_t k, std::uint64_t seed);

nlohmann::json to_json(const GridSearchResult& r);

}  // namespace revsent::models
