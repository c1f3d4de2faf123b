// Worker pool over trajectory indices. Workers pull indices from a shared
// counter; results must be written to per-index slots so that reductions can
// run in index order afterwards.
#pragma once

#include <functional>

namespace spinet {

// Effective pool size: `requested` (0 = hardware concurrency), capped by the
// SPINET_THREADS environment variable when set, and by `n_tasks`.
int resolve_thread_count(int requested, int n_tasks);

// Runs fn(i) for i in [0, n_tasks) on the pool. Exceptions other than
// per-task domain errors propagate from the first failing task.
void parallel_for_index(int n_tasks, int threads, const std::function<void(int)>& fn);

}  // namespace spinet
