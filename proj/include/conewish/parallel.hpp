#pragma once

#include <cstddef>
#include <functional>

namespace conewish {

/// Worker count: hardware concurrency, capped by CONEWISH_THREADS when set.
std::size_t worker_count();

/// Runs body(i) for i in [0, n). Iterations are split into contiguous chunks;
/// body must only write to slots owned by its index.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace conewish
