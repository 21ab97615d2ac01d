#pragma once

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace causetlab {

// Resolves a requested worker count: 0 means "hardware default", otherwise
// clamped to at least 1. Without OpenMP support everything runs serially.
int effective_jobs(int jobs);

// Applies fn to every index in [0, count) and returns the results in index
// order. jobs == 1 runs the plain serial loop (the reference path used by
// tests); jobs != 1 distributes indices over OpenMP threads with a static
// schedule, writing each result into its own slot, so the output is identical
// to the serial path whenever fn(i) depends only on i.
template <typename T, typename Fn>
std::vector<T> mc_map(std::size_t count, int jobs, Fn&& fn) {
  std::vector<T> out(count);
  const int workers = effective_jobs(jobs);
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(workers)
  for (long long i = 0; i < static_cast<long long>(count); ++i)
    out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
#else
  for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
#endif
  return out;
}

}  // namespace causetlab
