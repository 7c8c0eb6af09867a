#pragma once

// Execution switch for the data-parallel kernels. Every kernel that takes an
// Execution keeps a plain serial loop as its reference path; both paths run
// the same per-item code, so results are bitwise identical.

#include <cstddef>
#include <exception>
#include <vector>

#include <omp.h>

namespace jch {

enum class Execution { serial, parallel };

/// Caps the OpenMP team size; n <= 0 restores the runtime default.
void set_thread_cap(int n);
int thread_cap();

/// Runs body(i) for i in [0, count). An exception thrown by any item is
/// rethrown after the loop; when several items fail, the lowest index wins.
template <class Body>
void for_each_index(std::size_t count, Execution exec, Body&& body) {
  std::vector<std::exception_ptr> failures(count);
  const auto n = static_cast<long long>(count);
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_cap())
    for (long long i = 0; i < n; ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
        failures[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  } else {
    for (long long i = 0; i < n; ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
        failures[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  }
  for (auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
}

}  // namespace jch
