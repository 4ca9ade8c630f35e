#include "bvg/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>

namespace bvg {

namespace {
std::atomic<int> g_threads{0};
}

int thread_count() {
  const int n = g_threads.load(std::memory_order_relaxed);
  return n > 0 ? n : std::max(1, omp_get_max_threads());
}

void set_thread_count(int n) { g_threads.store(std::max(0, n), std::memory_order_relaxed); }

}  // namespace bvg
