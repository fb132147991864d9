#include "povml/threading.hpp"

#include <atomic>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace povml {

namespace {
std::atomic<int> g_threads{0};  // 0 = uninitialized, use machine default
}

int thread_count() {
    int n = g_threads.load(std::memory_order_relaxed);
    if (n > 0) return n;
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_thread_count(int n) { g_threads.store(n > 0 ? n : 0, std::memory_order_relaxed); }

}  // namespace povml
