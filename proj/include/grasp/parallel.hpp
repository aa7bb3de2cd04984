#pragma once

#include <cstddef>
#include <functional>

namespace grasp {

/// Worker count: `requested` if non-zero, otherwise hardware concurrency,
/// capped by the GRASP_THREADS environment variable when it is set.
std::size_t worker_count(std::size_t requested = 0);

/// Runs body(i) for i in [0, count) on up to `workers` threads. The first
/// exception thrown by any task is rethrown after all workers join.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& body);

} // namespace grasp
