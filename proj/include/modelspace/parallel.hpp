#pragma once

#include <cstddef>
#include <functional>

namespace modelspace {

/// Upper bound on worker threads. Reads MODELSPACE_THREADS on first use,
/// defaults to the hardware concurrency.
std::size_t thread_limit();

/// Overrides the thread limit (1 forces serial execution).
void set_thread_limit(std::size_t n);

/// Calls fn(i) for i in [0, n). Work is split into contiguous blocks; callers
/// write results into per-index slots and reduce afterwards, so results never
/// depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace modelspace
