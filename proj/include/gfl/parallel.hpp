#pragma once

#include <cstddef>
#include <functional>

namespace gfl {

/// Worker count from GF_LATTICE_THREADS (unset or 0 = hardware concurrency).
int worker_count();

/// Overrides the environment for the calling process; 0 restores automatic selection.
void set_worker_count(int n);

/// Runs fn(i) for i in [0, count) on up to worker_count() threads with static chunking.
/// Every index is processed exactly once; if several indices throw, the exception from the
/// lowest index is rethrown, so failures are independent of scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace gfl
