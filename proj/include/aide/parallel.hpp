#pragma once

#include <cstddef>
#include <functional>

namespace aide {

// Runs fn(i) for i in [0, n) across up to `workers` threads, each owning a
// contiguous index range. Callers must write results into per-index slots;
// with that discipline the outcome is identical for any worker count. The
// first exception thrown by any worker is rethrown after all threads join.
void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t)>& fn);

}  // namespace aide
