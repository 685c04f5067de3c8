#include "model_detail.hpp"
#include "revsent/error.hpp"
#include "revsent/parallel.hpp"
#include "revsent/rng.hpp"

#include <algorithm>
#include <cmath>

namespace revsent::models {

namespace {

using Histogram = std::array<std::uint32_t, kNumClasses>;

double gini(const Histogram& h, double n) {
    if (n <= 0.0) return 0.0;
    double s = 1.0;
    for (auto c : h) {
        const double p = static_cast<double>(c) / n;
        s -= p * p;
    }
    return s;
}

bool is_pure(const Histogram& h) {
    int nonzero = 0;
    for (auto c : h) nonzero += c > 0;
    return nonzero <= 1;
}

struct SplitChoice {
    bool found = false;
    std::uint32_t feature = 0;
    double threshold = 0.0;
    double impurity = 0.0;
};

struct Observation {
    std::uint32_t feature;
    double value;
    std::uint8_t label;

    bool operator<(const Observation& o) const {
        if (feature != o.feature) return feature < o.feature;
        return value < o.value;
    }
};

class TreeBuilder {
public:
    TreeBuilder(std::span<const SparseVector> X, std::span<const SentimentLabel> y, const RFParams& params,
                std::size_t features_per_split, Rng& rng)
        : X_(X), y_(y), params_(params), k_(features_per_split), rng_(rng) {}

    DecisionTree build(std::vector<std::uint32_t> samples) {
        DecisionTree tree;
        grow(tree, std::move(samples), 0);
        return tree;
    }

private:
    std::uint32_t grow(DecisionTree& tree, std::vector<std::uint32_t> samples, std::size_t depth) {
        const auto node_id = static_cast<std::uint32_t>(tree.nodes.size());
        tree.nodes.emplace_back();
        Histogram hist{};
        for (auto s : samples) ++hist[index_of(y_[s])];
        tree.nodes[node_id].counts = hist;

        if (depth >= params_.max_depth || is_pure(hist) || samples.size() < 2 * params_.min_leaf) return node_id;
        const SplitChoice split = best_split(samples, hist);
        if (!split.found) return node_id;

        std::vector<std::uint32_t> left, right;
        for (auto s : samples) {
            (X_[s].get(split.feature) <= split.threshold ? left : right).push_back(s);
        }
        samples.clear();
        samples.shrink_to_fit();
        tree.nodes[node_id].feature = static_cast<std::int32_t>(split.feature);
        tree.nodes[node_id].threshold = split.threshold;
        const auto l = grow(tree, std::move(left), depth + 1);
        const auto r = grow(tree, std::move(right), depth + 1);
        tree.nodes[node_id].left = l;
        tree.nodes[node_id].right = r;
        return node_id;
    }

    // Candidate features are drawn uniformly without replacement from the
    // features that vary across the node's samples; absent entries count as 0.
    SplitChoice best_split(const std::vector<std::uint32_t>& samples, const Histogram& node_hist) {
        obs_.clear();
        for (auto s : samples) {
            const auto label = static_cast<std::uint8_t>(index_of(y_[s]));
            for (const auto& e : X_[s].entries) obs_.push_back({e.index, e.value, label});
        }
        std::sort(obs_.begin(), obs_.end());

        // [begin, end) ranges of obs_ per varying feature, ascending feature id.
        struct Range { std::size_t begin, end; };
        std::vector<Range> varying;
        const std::size_t m = samples.size();
        for (std::size_t i = 0; i < obs_.size();) {
            std::size_t j = i;
            while (j < obs_.size() && obs_[j].feature == obs_[i].feature) ++j;
            const bool has_zeros = (j - i) < m;
            if (has_zeros || obs_[i].value != obs_[j - 1].value) varying.push_back({i, j});
            i = j;
        }

        const std::size_t draws = std::min(k_, varying.size());
        for (std::size_t i = 0; i < draws; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng_.uniform_index(varying.size() - i));
            std::swap(varying[i], varying[j]);
        }

        SplitChoice best;
        const double total = static_cast<double>(m);
        for (std::size_t i = 0; i < draws; ++i) {
            const auto [begin, end] = varying[i];
            // Zeros sit left of every positive value.
            Histogram left{};
            Histogram nonzero{};
            for (std::size_t k = begin; k < end; ++k) ++nonzero[obs_[k].label];
            for (std::size_t c = 0; c < kNumClasses; ++c) left[c] = node_hist[c] - nonzero[c];
            std::size_t n_left = m - (end - begin);

            auto consider = [&](double threshold) {
                const std::size_t n_right = m - n_left;
                if (n_left < params_.min_leaf || n_right < params_.min_leaf) return;
                Histogram right{};
                for (std::size_t c = 0; c < kNumClasses; ++c) right[c] = node_hist[c] - left[c];
                const double nl = static_cast<double>(n_left);
                const double nr = static_cast<double>(n_right);
                const double impurity = (nl / total) * gini(left, nl) + (nr / total) * gini(right, nr);
                if (!best.found || impurity < best.impurity) {
                    best = {true, obs_[begin].feature, threshold, impurity};
                }
            };

            double prev = 0.0;
            bool have_prev = n_left > 0;
            for (std::size_t k = begin; k < end;) {
                const double v = obs_[k].value;
                if (have_prev) consider(0.5 * (prev + v));
                while (k < end && obs_[k].value == v) {
                    ++left[obs_[k].label];
                    ++n_left;
                    ++k;
                }
                prev = v;
                have_prev = true;
            }
        }
        return best;
    }

    std::span<const SparseVector> X_;
    std::span<const SentimentLabel> y_;
    const RFParams& params_;
    std::size_t k_;
    Rng& rng_;
    std::vector<Observation> obs_;
};

}  // namespace

const TreeNode& DecisionTree::leaf_for(const SparseVector& x) const {
    const TreeNode* node = &nodes.front();
    while (!node->is_leaf()) {
        node = &nodes[x.get(static_cast<std::uint32_t>(node->feature)) <= node->threshold ? node->left : node->right];
    }
    return *node;
}

std::size_t DecisionTree::depth() const {
    std::vector<std::size_t> level(nodes.size(), 0);
    std::size_t deepest = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        deepest = std::max(deepest, level[i]);
        if (!nodes[i].is_leaf()) {
            level[nodes[i].left] = level[i] + 1;
            level[nodes[i].right] = level[i] + 1;
        }
    }
    return deepest;
}

RFModel train_rf(std::span<const SparseVector> X, std::span<const SentimentLabel> y, const RFParams& params) {
    const std::size_t d = detail::check_training_set(X, y, "train_rf");
    require(X.size() >= 2, "train_rf: need at least two samples");
    require(params.n_trees >= 1, "train_rf: n_trees must be at least 1");
    require(params.min_leaf >= 1, "train_rf: min_leaf must be at least 1");

    const std::size_t k = params.features_per_split > 0
                              ? params.features_per_split
                              : std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(d)))));
    RFModel model;
    model.params = params;
    model.dimension = d;
    model.trees.resize(params.n_trees);
    const auto n = static_cast<std::uint32_t>(X.size());
    parallel_for(params.n_trees, [&](std::size_t t) {
        Rng rng(derive_seed(params.seed, t));
        std::vector<std::uint32_t> samples(n);
        if (params.bootstrap) {
            for (auto& s : samples) s = static_cast<std::uint32_t>(rng.uniform_index(n));
            std::sort(samples.begin(), samples.end());
        } else {
            for (std::uint32_t i = 0; i < n; ++i) samples[i] = i;
        }
        TreeBuilder builder(X, y, params, k, rng);
        model.trees[t] = builder.build(std::move(samples));
    });
    return model;
}

Scores RFModel::scores(const SparseVector& x) const {
    Scores votes{};
    for (const auto& tree : trees) {
        const auto& counts = tree.leaf_for(x).counts;
        std::size_t best = 0;
        for (std::size_t c = 1; c < kNumClasses; ++c) {
            if (counts[c] > counts[best]) best = c;
        }
        votes[best] += 1.0;
    }
    for (auto& v : votes) v /= static_cast<double>(trees.size());
    return votes;
}

}  // namespace revsent::models
