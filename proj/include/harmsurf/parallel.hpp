#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace harmsurf {

/// Thread count for parallel kernels: HARMSURF_THREADS if set, else the OpenMP default.
int thread_count();

/// Runs body(i) for i in [0, n).  The parallel path uses OpenMP with dynamic
/// scheduling; the first exception thrown by any iteration is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, bool parallel = true);

}  // namespace harmsurf
