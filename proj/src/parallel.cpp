#include "jch/parallel.hpp"

#include <atomic>

namespace jch {

namespace {
std::atomic<int> g_thread_cap{0};
}

void set_thread_cap(int n) { g_thread_cap.store(n > 0 ? n : 0); }

int thread_cap() {
  const int cap = g_thread_cap.load();
  return cap > 0 ? cap : omp_get_max_threads();
}

}  // namespace jch
