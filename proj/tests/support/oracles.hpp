#pragma once

// Self-contained reference implementations used to compute and freeze the
// expected values asserted by the tests. Everything here is a plain loop over
// std facilities and deliberately shares no code with the library under test.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using Fn1 = std::function<double(double)>;

// Root of f on [lo, hi] by bisection; f(lo) and f(hi) must straddle zero.
inline double bisect(const Fn1& f, double lo, double hi, int iters = 200) {
  double flo = f(lo);
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((flo <= 0.0) == (fm <= 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Minimizer of a unimodal f on [lo, hi] by golden-section search.
inline double golden_min(const Fn1& f, double lo, double hi, int iters = 200) {
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// Composite-trapezoid integral of f over [lo, hi] with n panels.
inline double trapezoid(const Fn1& f, double lo, double hi, int n) {
  const double h = (hi - lo) / n;
  double s = 0.5 * (f(lo) + f(hi));
  for (int i = 1; i < n; ++i) s += f(lo + h * i);
  return s * h;
}

// Gibbs mass of [a, b] inside [lo, hi] for the density proportional to
// exp(-beta * f), with min-f subtraction for stability.
inline double gibbs_mass(const Fn1& f, double beta, double lo, double hi, double a, double b,
                         int n = 100001) {
  double fmin = f(lo);
  for (int i = 1; i <= n; ++i) fmin = std::min(fmin, f(lo + (hi - lo) * i / n));
  const auto dens = [&](double t) { return std::exp(-beta * (f(t) - fmin)); };
  return trapezoid(dens, a, b, n) / trapezoid(dens, lo, hi, n);
}

// CDF of the same Gibbs law, tabulated by cumulative trapezoid on an (n+1)-point
// grid and linearly interpolated between grid points.
struct GibbsCdf {
  double lo = 0.0, hi = 1.0;
  std::vector<double> cum;  // cum[i] = CDF at lo + i*(hi-lo)/n, cum.back() = 1

  double operator()(double t) const {
    if (t <= lo) return 0.0;
    if (t >= hi) return 1.0;
    const double pos = (t - lo) / (hi - lo) * (cum.size() - 1);
    const std::size_t i = static_cast<std::size_t>(pos);
    const double frac = pos - i;
    return cum[i] + frac * (cum[i + 1] - cum[i]);
  }
};

inline GibbsCdf gibbs_cdf(const Fn1& f, double beta, double lo, double hi, int n = 100000) {
  GibbsCdf out;
  out.lo = lo;
  out.hi = hi;
  const double h = (hi - lo) / n;
  std::vector<double> vals(n + 1);
  double fmin = f(lo);
  for (int i = 0; i <= n; ++i) {
    vals[i] = f(lo + h * i);
    fmin = std::min(fmin, vals[i]);
  }
  out.cum.assign(n + 1, 0.0);
  for (int i = 1; i <= n; ++i) {
    const double d0 = std::exp(-beta * (vals[i - 1] - fmin));
    const double d1 = std::exp(-beta * (vals[i] - fmin));
    out.cum[i] = out.cum[i - 1] + 0.5 * (d0 + d1) * h;
  }
  const double total = out.cum.back();
  for (double& c : out.cum) c /= total;
  return out;
}

// Kolmogorov-Smirnov statistic of a sample against a reference CDF.
inline double ks_statistic(std::vector<double> samples, const Fn1& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double c = cdf(samples[i]);
    ks = std::max(ks, std::max(std::fabs(c - i / n), std::fabs((i + 1) / n - c)));
  }
  return ks;
}

// Ordinary-least-squares slope of y on x.
inline double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

// Plain 1-D gradient descent with clamping to [lo, hi]; returns the final point.
inline double gd_1d(const Fn1& df, double t0, double step, int iters, double lo, double hi) {
  double t = t0;
  for (int i = 0; i < iters; ++i) {
    t = std::clamp(t - step * df(t), lo, hi);
  }
  return t;
}

// Central difference of f at t.
inline double central_diff(const Fn1& f, double t, double h) {
  return (f(t + h) - f(t - h)) / (2.0 * h);
}

// ----------------------------------------------------------------- benchmarks

// The quartic coordinate function g(t) = (t^4 - 16 t^2 + 5 t)/2 and its
// derivative, written out directly from the formula.
inline double st_g(double t) { return 0.5 * (t * t * t * t - 16.0 * t * t + 5.0 * t); }
inline double st_dg(double t) { return 0.5 * (4.0 * t * t * t - 32.0 * t + 5.0); }

// Its three stationary points (roots of 4t^3 - 32t + 5) by bisection.
inline double st_root_deep() { return bisect(st_dg, -4.0, -2.0); }
inline double st_root_mid() { return bisect(st_dg, -1.0, 1.0); }
inline double st_root_shallow() { return bisect(st_dg, 2.0, 4.0); }

// Fraction of a uniform [-5, 5] start grid that plain GD (per-coordinate step
// = step/d for the d-normalized objective) brings within value_tol of the deep
// minimum value after `iters` steps.
inline double st_basin_fraction(double step_over_d, int iters, double value_tol,
                                int grid = 100000) {
  const double deep_value = st_g(st_root_deep());
  int hits = 0;
  for (int i = 0; i < grid; ++i) {
    const double t0 = -5.0 + 10.0 * (i + 0.5) / grid;
    const double t = gd_1d(st_dg, t0, step_over_d, iters, -5.0, 5.0);
    if (st_g(t) <= deep_value + value_tol) ++hits;
  }
  return static_cast<double>(hits) / grid;
}

// The two-well quartic W(t) = (t^2 - 1)^2 + (gap/4) (t^3 - 3t), written out
// directly; deep minimum at +1 with value -gap/2.
inline Fn1 well_fn(double gap) {
  return [gap](double t) {
    return (t * t - 1.0) * (t * t - 1.0) + 0.25 * gap * (t * t * t - 3.0 * t);
  };
}

}  // namespace oracle
