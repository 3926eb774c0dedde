#pragma once

#include <cstddef>
#include <exception>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace phasebound {

// Every data-parallel kernel in the library has a plain serial loop next to its
// OpenMP loop. The serial path is the reference the tests compare against.
enum class Exec { serial, parallel };

// Fills out[i] = f(i) for i in [0, n). Each element is computed independently, so
// the result is bit-identical for any thread count. The exception thrown by the
// lowest failing index is rethrown after the loop.
template <class T, class F>
std::vector<T> map_indexed(std::size_t n, F&& f, Exec exec = Exec::parallel) {
  std::vector<T> out(n);
  if (exec == Exec::serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

template <class F>
std::vector<double> map_indexed(std::size_t n, F&& f, Exec exec = Exec::parallel) {
  return map_indexed<double>(n, std::forward<F>(f), exec);
}

/// Caps the OpenMP team size; values < 1 leave the runtime default.
inline void set_thread_limit(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace phasebound
