#include "ivp/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

namespace ivp::par {

namespace {
std::atomic<int> g_threads{1};
}

int threads() { return g_threads.load(std::memory_order_relaxed); }

void set_threads(int k) { g_threads.store(std::max(1, k), std::memory_order_relaxed); }

double sum_serial(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i];
  return s;
}

double sum(const double* x, std::size_t n) {
#ifdef _OPENMP
  const int k = threads();
  if (k > 1 && n >= kParallelGrain) {
    double s = 0.0;
    const std::int64_t m = static_cast<std::int64_t>(n);
#pragma omp parallel for num_threads(k) schedule(static) reduction(+ : s)
    for (std::int64_t i = 0; i < m; ++i) s += x[i];
    return s;
  }
#endif
  return sum_serial(x, n);
}

double dot_serial(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double dot(const double* a, const double* b, std::size_t n) {
#ifdef _OPENMP
  const int k = threads();
  if (k > 1 && n >= kParallelGrain) {
    double s = 0.0;
    const std::int64_t m = static_cast<std::int64_t>(n);
#pragma omp parallel for num_threads(k) schedule(static) reduction(+ : s)
    for (std::int64_t i = 0; i < m; ++i) s += a[i] * b[i];
    return s;
  }
#endif
  return dot_serial(a, b, n);
}

double max_abs_serial(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i]));
  return m;
}

double max_abs(const double* x, std::size_t n) {
#ifdef _OPENMP
  const int k = threads();
  if (k > 1 && n >= kParallelGrain) {
    double mx = 0.0;
    const std::int64_t m = static_cast<std::int64_t>(n);
#pragma omp parallel for num_threads(k) schedule(static) reduction(max : mx)
    for (std::int64_t i = 0; i < m; ++i) mx = std::max(mx, std::fabs(x[i]));
    return mx;
  }
#endif
  return max_abs_serial(x, n);
}

double min_serial(const double* x, std::size_t n) {
  if (n == 0) return 0.0;
  double m = x[0];
  for (std::size_t i = 1; i < n; ++i) m = std::min(m, x[i]);
  return m;
}

double min(const double* x, std::size_t n) {
  if (n == 0) return 0.0;
#ifdef _OPENMP
  const int k = threads();
  if (k > 1 && n >= kParallelGrain) {
    double mn = x[0];
    const std::int64_t m = static_cast<std::int64_t>(n);
#pragma omp parallel for num_threads(k) schedule(static) reduction(min : mn)
    for (std::int64_t i = 0; i < m; ++i) mn = std::min(mn, x[i]);
    return mn;
  }
#endif
  return min_serial(x, n);
}

double max_serial(const double* x, std::size_t n) {
  if (n == 0) return 0.0;
  double m = x[0];
  for (std::size_t i = 1; i < n; ++i) m = std::max(m, x[i]);
  return m;
}

double max(const double* x, std::size_t n) {
  if (n == 0) return 0.0;
#ifdef _OPENMP
  const int k = threads();
  if (k > 1 && n >= kParallelGrain) {
    double mx = x[0];
    const std::int64_t m = static_cast<std::int64_t>(n);
#pragma omp parallel for num_threads(k) schedule(static) reduction(max : mx)
    for (std::int64_t i = 0; i < m; ++i) mx = std::max(mx, x[i]);
    return mx;
  }
#endif
  return max_serial(x, n);
}

}  // namespace ivp::par
