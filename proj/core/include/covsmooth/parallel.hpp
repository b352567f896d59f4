#pragma once

#include <cstddef>
#include <functional>

namespace covsmooth {

/// Worker cap: COVSMOOTH_THREADS when set (minimum 1), otherwise the
/// hardware concurrency.
std::size_t worker_count();

/// Runs fn(0) .. fn(count - 1) across up to worker_count() threads.
/// Deterministic as long as fn(i) only writes to slot i of shared state.
/// Nested calls run serially, so callers can parallelize at whichever
/// level has the most cells without oversubscribing. The first exception
/// thrown by any fn is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

} // namespace covsmooth
