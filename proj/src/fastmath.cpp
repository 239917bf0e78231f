#include "gibbsinit/fastmath.hpp"

#include <cmath>
#include <limits>

namespace gibbsinit {

double fast_exp(double x) {
  if (std::isnan(x)) return x;
  if (x > 709.782712893384) return std::numeric_limits<double>::infinity();
  if (x < -745.2) return 0.0;
  if (x < -708.0) {
    // Subnormal results: shift into the core's range, rescale exactly.
    constexpr double shift = 64 * 6.93147180559945309417e-01;
    return std::ldexp(detail::exp_core(x + shift), -64);
  }
  return detail::exp_core(x);
}

double fast_log(double x) {
  if (std::isnan(x)) return x;
  if (x < 0.0) return std::numeric_limits<double>::quiet_NaN();
  if (x == 0.0) return -std::numeric_limits<double>::infinity();
  if (std::isinf(x)) return x;
  if (x < 2.2250738585072014e-308) {
    // Subnormal input: renormalize, then undo the scaling.
    return detail::log_core(x * 0x1.0p54) - 54 * 6.93147180559945309417e-01;
  }
  return detail::log_core(x);
}

void exp_pointwise(const double* in, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double x = in[i];
    x = x < -708.0 ? -708.0 : x;
    x = x > 709.0 ? 709.0 : x;
    out[i] = detail::exp_core(x);
  }
}

void log_pointwise(const double* in, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = detail::log_core(in[i]);
}

}  // namespace gibbsinit
