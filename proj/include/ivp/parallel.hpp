#pragma once

#include <cstddef>
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ivp::par {

/** Worker count used by every data-parallel kernel.  1 selects the serial
 *  reference path, which evaluates in a fixed order and is bitwise
 *  deterministic.  Values > 1 enable the OpenMP path; reductions may then
 *  differ from the serial result by at most ~1e-13 relative. */
int threads();

/** Set the worker count (clamped below at 1). */
void set_threads(int k);

/** Loop bodies smaller than this run serially even when threads() > 1. */
inline constexpr std::size_t kParallelGrain = 4096;

template <class F>
void for_each_serial(std::size_t n, F&& f) {
  for (std::size_t i = 0; i < n; ++i) f(i);
}

template <class F>
void for_each(std::size_t n, F&& f) {
#ifdef _OPENMP
  const int k = threads();
  if (k > 1 && n >= kParallelGrain) {
    const std::int64_t m = static_cast<std::int64_t>(n);
#pragma omp parallel for num_threads(k) schedule(static)
    for (std::int64_t i = 0; i < m; ++i) f(static_cast<std::size_t>(i));
    return;
  }
#endif
  for_each_serial(n, f);
}

/* Reduction kernels.  The serial variants accumulate left to right. */

double sum_serial(const double* x, std::size_t n);
double sum(const double* x, std::size_t n);

double dot_serial(const double* a, const double* b, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);

double max_abs_serial(const double* x, std::size_t n);
double max_abs(const double* x, std::size_t n);

double min_serial(const double* x, std::size_t n);
double min(const double* x, std::size_t n);

double max_serial(const double* x, std::size_t n);
double max(const double* x, std::size_t n);

template <class F>
double sum_transform_serial(std::size_t n, F&& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += f(i);
  return s;
}

template <class F>
double sum_transform(std::size_t n, F&& f) {
#ifdef _OPENMP
  const int k = threads();
  if (k > 1 && n >= kParallelGrain) {
    double s = 0.0;
    const std::int64_t m = static_cast<std::int64_t>(n);
#pragma omp parallel for num_threads(k) schedule(static) reduction(+ : s)
    for (std::int64_t i = 0; i < m; ++i) s += f(static_cast<std::size_t>(i));
    return s;
  }
#endif
  return sum_transform_serial(n, f);
}

}  // namespace ivp::par
