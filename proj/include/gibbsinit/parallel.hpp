#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gibbsinit {

int max_workers();
// 0 leaves the current thread count unchanged.
void set_workers(int n);

// Runs f(i) for i in [0, n) across the available workers. Static schedule;
// results must be written to disjoint slots so ordering never matters.
template <class F>
void parallel_for(std::size_t n, F&& f) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < (long long)n; ++i) f((std::size_t)i);
#else
  for (std::size_t i = 0; i < n; ++i) f(i);
#endif
}

// Deterministic reduction: fixed 1024-element blocks summed left-to-right
// within each block, block partials combined in index order. The tree shape
// depends only on n, never on the worker count, so parallel runs reproduce
// serial runs bit for bit.
inline constexpr std::size_t kSumBlock = 1024;

template <class F>
double blocked_sum(std::size_t n, F&& term) {
  if (n == 0) return 0.0;
  if (n <= kSumBlock) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += term(i);
    return s;
  }
  const std::size_t nblocks = (n + kSumBlock - 1) / kSumBlock;
  std::vector<double> partial(nblocks);
  parallel_for(nblocks, [&](std::size_t b) {
    const std::size_t lo = b * kSumBlock;
    const std::size_t hi = std::min(n, lo + kSumBlock);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    partial[b] = s;
  });
  double s = 0.0;
  for (std::size_t b = 0; b < nblocks; ++b) s += partial[b];
  return s;
}

// Same fixed-tree contract for width-sized accumulators: add_term(i, acc) adds
// row i's contribution into acc[0..width).
template <class F>
std::vector<double> blocked_vector_sum(std::size_t n, std::size_t width, F&& add_term) {
  std::vector<double> total(width, 0.0);
  if (n == 0) return total;
  if (n <= kSumBlock) {
    for (std::size_t i = 0; i < n; ++i) add_term(i, total.data());
    return total;
  }
  const std::size_t nblocks = (n + kSumBlock - 1) / kSumBlock;
  std::vector<double> partial(nblocks * width, 0.0);
  parallel_for(nblocks, [&](std::size_t b) {
    const std::size_t lo = b * kSumBlock;
    const std::size_t hi = std::min(n, lo + kSumBlock);
    double* acc = partial.data() + b * width;
    for (std::size_t i = lo; i < hi; ++i) add_term(i, acc);
  });
  for (std::size_t b = 0; b < nblocks; ++b) {
    const double* acc = partial.data() + b * width;
    for (std::size_t j = 0; j < width; ++j) total[j] += acc[j];
  }
  return total;
}

double blocked_sum(const double* x, std::size_t n);

// Naive left-to-right reference; kept to cross-check the blocked reduction.
double serial_sum(const double* x, std::size_t n);

template <class F>
double serial_sum(std::size_t n, F&& term) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += term(i);
  return s;
}

}  // namespace gibbsinit
