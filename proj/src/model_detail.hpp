#pragma once

#include "revsent/models.hpp"

namespace revsent::models::detail {

// Validates lengths, dimensions and finiteness; returns the dimension.
std::size_t check_training_set(std::span<const SparseVector> X, std::span<const SentimentLabel> y,
                               std::string_view who);
std::size_t distinct_classes(std::span<const SentimentLabel> y);

}  // namespace revsent::models::detail
