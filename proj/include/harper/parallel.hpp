#pragma once

#include <omp.h>

#include <exception>
#include <stdexcept>

namespace harper {

inline int resolve_workers(int workers) {
  return workers > 0 ? workers : omp_get_max_threads();
}

/// Static-schedule parallel loop.  Each index writes only its own slots, so
/// results are independent of the worker count; the first exception thrown
/// by a body is captured and rethrown after the region.
template <class F>
void parallel_for(long long n, int workers, F&& body) {
  std::exception_ptr err = nullptr;
  const int w = resolve_workers(workers);
#pragma omp parallel for schedule(static) num_threads(w)
  for (long long i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

}  // namespace harper
