#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "gibbsinit/domain.hpp"

namespace gibbsinit {

// Row-major collection of fixed-width points with stable iteration order.
struct Dataset {
  int dim = 0;
  std::vector<double> values;  // size() * dim entries

  std::size_t size() const { return dim > 0 ? values.size() / dim : 0; }
  const double* row(std::size_t i) const { return values.data() + i * (std::size_t)dim; }
  void push_row(const double* x) { values.insert(values.end(), x, x + dim); }
};

// Value/gradient oracle over a bounded domain. Objectives are immutable after
// construction and safe to evaluate from concurrent workers.
struct Objective {
  int dim = 0;
  Domain domain;
  std::function<double(const double*)> value_fn;
  // Optional; central differences with h_i = 1e-6*(1+|theta_i|) stand in.
  std::function<void(const double*, double*)> gradient_fn;
  // True when value(theta) is a pure function given any frozen noise draws.
  bool deterministic = true;
  // Additively separable objectives expose their per-coordinate terms
  // (value = sum of terms); required by the exact rejection sampler.
  std::vector<std::function<double(double)>> per_coordinate;

  double value(const std::vector<double>& theta) const;
  double value_at(const double* theta) const { return value_fn(theta); }
  std::vector<double> gradient(const std::vector<double>& theta) const;
  void gradient_at(const double* theta, double* out) const;
  bool has_analytic_gradient() const { return bool(gradient_fn); }
  bool separable() const { return !per_coordinate.empty(); }
};

// Per-example loss f(theta, x); gradient is with respect to theta and optional.
struct PointwiseLoss {
  std::function<double(const double* theta, const double* x)> value;
  std::function<void(const double* theta, const double* x, double* grad_out)> gradient;
};

// Mean of pointwise losses (and gradients) over all rows of data.
Objective empirical_loss(const Dataset& data, const PointwiseLoss& loss, const Domain& domain);

// n rows drawn uniformly without replacement; identical seed, identical subset.
Dataset subsample(const Dataset& data, std::size_t n, std::uint64_t seed);

// Max over coordinates of |central difference - analytic gradient| at theta,
// which must be strictly interior.
double fd_gradient_check(const Objective& obj, const std::vector<double>& theta, double h);

}  // namespace gibbsinit
