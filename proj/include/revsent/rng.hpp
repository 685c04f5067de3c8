#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace revsent {

// Seeded generator with portable draws. std::mt19937_64's raw output is fixed
// by the standard, but the std distributions are not, so bounded integers and
// unit reals are derived here directly.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t uniform_index(std::uint64_t bound);

    // Uniform real in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform_index(i));
            std::swap(items[i - 1], items[j]);
        }
    }

    template <typename T>
    void shuffle(std::vector<T>& items) { shuffle(std::span<T>(items)); }

private:
    std::mt19937_64 engine_;
};

// Stable child seed for (root, index); used so that parallel and serial
// evaluation of independent tasks consume identical random streams.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index);

}  // namespace revsent
