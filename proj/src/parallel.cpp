#include "gibbsinit/parallel.hpp"

namespace gibbsinit {

int max_workers() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_workers(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

double blocked_sum(const double* x, std::size_t n) {
  return blocked_sum(n, [x](std::size_t i) { return x[i]; });
}

double serial_sum(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i];
  return s;
}

}  // namespace gibbsinit
