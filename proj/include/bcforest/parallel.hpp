#pragma once

#include <cstddef>

namespace bcf {

// Serial is the reference path; parallel runs the same per-index work under
// OpenMP. Every kernel writes only to its own index, so both paths produce
// bit-identical results.
enum class Execution { kSerial, kParallel };

// 0 = OpenMP default.
void set_thread_count(int threads);
int max_threads();

template <class Fn>
void for_each_index(std::size_t count, Execution exec, Fn&& fn) {
  const auto n = static_cast<long long>(count);
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < n; ++i) fn(static_cast<std::size_t>(i));
  } else {
    for (long long i = 0; i < n; ++i) fn(static_cast<std::size_t>(i));
  }
}

}  // namespace bcf
