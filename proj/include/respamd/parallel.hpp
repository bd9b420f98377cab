#pragma once

#include <algorithm>
#include <exception>
#include <mutex>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "respamd/types.hpp"

namespace respamd {

inline void set_thread_count(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

inline int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

/// Runs body(i) for i in [0, n) with dynamic scheduling. The first exception thrown
/// by any iteration is rethrown on the calling thread once all workers have stopped.
template <typename Body>
void parallel_for(Index n, Body&& body) {
  std::exception_ptr failure;
  std::mutex failure_mutex;
#pragma omp parallel for schedule(dynamic, 1)
  for (Index i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

/// Splits [0, n) into at most `parts` contiguous ranges of roughly equal total weight.
template <typename Weight>
std::vector<std::pair<Index, Index>> balanced_ranges(Index n, Index parts, Weight&& weight) {
  std::vector<std::pair<Index, Index>> ranges;
  if (n <= 0) return ranges;
  parts = std::max<Index>(1, std::min(parts, n));
  double total = 0;
  for (Index i = 0; i < n; ++i) total += double(weight(i));
  const double share = total / double(parts);
  Index begin = 0;
  double acc = 0;
  for (Index i = 0; i < n; ++i) {
    acc += double(weight(i));
    const bool last = i + 1 == n;
    if (last || (acc >= share * double(ranges.size() + 1) && Index(ranges.size()) + 1 < parts)) {
      ranges.emplace_back(begin, i + 1);
      begin = i + 1;
    }
  }
  return ranges;
}

}  // namespace respamd
