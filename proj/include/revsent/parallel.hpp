#pragma once

#include <cstddef>
#include <functional>

namespace revsent {

// Runs body(i) for i in [0, n) on a bounded set of worker threads. Each index
// is processed exactly once; callers write results into pre-sized slots so
// the outcome does not depend on scheduling. Nested calls run serially on
// the calling thread. The first exception caught in body is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// 0 means hardware concurrency.
void set_max_threads(std::size_t n);

}  // namespace revsent
