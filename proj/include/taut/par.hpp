#pragma once

// Parallel kernels run under OpenMP when available; every parallel entry
// point has a serial twin used as the reference in tests and benchmarks.
// TAUT_THREADS=1 (or building without OpenMP) forces serial execution.

#include <cstdlib>
#include <functional>
#include <vector>

#ifdef TAUT_HAVE_OPENMP
#include <omp.h>
#endif

namespace taut {

inline int thread_count() {
#ifdef TAUT_HAVE_OPENMP
  if (const char *env = std::getenv("TAUT_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// Applies fn(i) for i in [0, n); results are gathered by the caller through
// per-index output slots, so no synchronization is needed inside fn.
inline void parallel_for(int n, const std::function<void(int)> &fn) {
#ifdef TAUT_HAVE_OPENMP
  const int nt = thread_count();
  if (nt > 1 && n > 1) {
#pragma omp parallel for num_threads(nt) schedule(dynamic)
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
#endif
  for (int i = 0; i < n; ++i) fn(i);
}

inline void serial_for(int n, const std::function<void(int)> &fn) {
  for (int i = 0; i < n; ++i) fn(i);
}

} // namespace taut
