#pragma once

#include "revsent/features.hpp"
#include "revsent/types.hpp"

#include <vector>

namespace revsent::testing {

inline features::SparseVector sparse(const std::vector<double>& dense) {
    features::SparseVector v;
    v.dimension = dense.size();
    for (std::size_t i = 0; i < dense.size(); ++i) {
        if (dense[i] != 0.0) v.entries.push_back({static_cast<std::uint32_t>(i), dense[i]});
    }
    return v;
}

inline std::vector<double> dense(const features::SparseVector& v) {
    std::vector<double> d(v.dimension, 0.0);
    for (const auto& e : v.entries) d[e.index] = e.value;
    return d;
}

// {(+1 -> Positive), (-1 -> Negative)} x copies, one feature. A constant
// second column keeps the vectors non-empty for sparse trainers.
struct Dataset {
    std::vector<features::SparseVector> X;
    std::vector<SentimentLabel> y;
};

inline Dataset separable_1d(std::size_t copies = 10) {
    Dataset d;
    for (std::size_t i = 0; i < copies; ++i) {
        d.X.push_back(sparse({1.0}));
        d.y.push_back(SentimentLabel::Positive);
        d.X.push_back(sparse({-1.0}));
        d.y.push_back(SentimentLabel::Negative);
    }
    return d;
}

}  // namespace revsent::testing
