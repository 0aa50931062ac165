#pragma once
// Deterministic parallel map. Parallel loops only ever write out[i] from
// iteration i (no shared accumulators), and every reduction afterwards runs
// serially in index order, so results are bitwise identical no matter the
// thread count. LHYLAB_THREADS caps the OpenMP thread pool.

#include <cstddef>

namespace lhy::par {

// Thread count used for kernels: min(LHYLAB_THREADS, omp max) when OpenMP is
// compiled in, otherwise 1.
int max_threads();
bool parallel_enabled();

namespace detail {
void run_indexed(std::size_t n, void* ctx, void (*fn)(void*, std::size_t), bool parallel);
}

// out-of-line type erasure keeps OpenMP pragmas in one translation unit
template <class F>
inline void for_each_index(std::size_t n, F&& f) {
  auto thunk = [](void* ctx, std::size_t i) { (*static_cast<F*>(ctx))(i); };
  detail::run_indexed(n, &f, thunk, true);
}

template <class F>
inline void for_each_index_serial(std::size_t n, F&& f) {
  auto thunk = [](void* ctx, std::size_t i) { (*static_cast<F*>(ctx))(i); };
  detail::run_indexed(n, &f, thunk, false);
}

}  // namespace lhy::par
