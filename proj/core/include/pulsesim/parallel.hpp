#pragma once

#include <functional>

namespace pulsesim {

/// requested > 0 wins, then PULSESIM_THREADS, then the hardware count;
/// clamped to [1, max(1, tasks)].
int resolve_workers(int requested, int tasks);

/// Calls fn(i) for i in [0, n) on `workers` threads. Tasks are claimed in
/// index order; the first exception is rethrown after all workers stop.
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

}  // namespace pulsesim
