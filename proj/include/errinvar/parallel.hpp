#pragma once

#include <cstddef>
#include <functional>

namespace errinvar {

// Worker count: hardware concurrency capped by ERRINVAR_THREADS when set.
std::size_t worker_count();

// Runs body(i) for i in [0, n). Each index runs exactly once; callers write
// results into per-index slots so the output never depends on scheduling.
// The first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace errinvar
