#pragma once

// Bounded worker pool for embarrassingly parallel sweeps (seed trials,
// parameter grids).  The KGH_THREADS environment variable caps the worker
// count; results are written to caller-indexed slots so the outcome does not
// depend on scheduling.

#include <functional>

namespace kgh {

int worker_count(int task_count);

// Runs fn(i) for i in [0, count) across at most worker_count(count) threads.
// Exceptions from tasks are rethrown (first one wins) after all workers join.
void parallel_for(int count, const std::function<void(int)>& fn);

}  // namespace kgh
