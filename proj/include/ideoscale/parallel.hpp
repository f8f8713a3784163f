#pragma once

#include <cstddef>
#include <functional>

namespace ideoscale {

/// Worker count: IDEOSCALE_WORKERS if set and positive, else hardware concurrency.
std::size_t worker_count();

/// Runs fn(begin, end) over a static partition of [0, n). Each index is
/// visited exactly once; callers write to disjoint slots so results do not
/// depend on the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace ideoscale
