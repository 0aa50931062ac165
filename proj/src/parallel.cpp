#include "lhylab/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef LHYLAB_HAVE_OPENMP
#include <omp.h>
#endif

namespace lhy::par {

int max_threads() {
#ifdef LHYLAB_HAVE_OPENMP
  int n = omp_get_max_threads();
  if (const char* env = std::getenv("LHYLAB_THREADS")) {
    try {
      int cap = std::stoi(env);
      if (cap >= 1 && cap < n) n = cap;
      if (cap >= 1 && cap > n) n = cap;  // allow oversubscription for testing
    } catch (...) {
    }
  }
  return n < 1 ? 1 : n;
#else
  return 1;
#endif
}

bool parallel_enabled() {
#ifdef LHYLAB_HAVE_OPENMP
  return max_threads() > 1;
#else
  return false;
#endif
}

namespace detail {
void run_indexed(std::size_t n, void* ctx, void (*fn)(void*, std::size_t), bool parallel) {
#ifdef LHYLAB_HAVE_OPENMP
  if (parallel && n > 1) {
    const int nt = max_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      fn(ctx, static_cast<std::size_t>(i));
    return;
  }
#else
  (void)parallel;
#endif
  for (std::size_t i = 0; i < n; ++i) fn(ctx, i);
}
}  // namespace detail

}  // namespace lhy::par
