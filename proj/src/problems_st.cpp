#include "gibbsinit/problems.hpp"

#include <cmath>
#include <memory>

#include "gibbsinit/error.hpp"
#include "gibbsinit/parallel.hpp"

namespace gibbsinit {

double st_coordinate(double t) {
  const double t2 = t * t;
  return 0.5 * (t2 * t2 - 16.0 * t2 + 5.0 * t);
}

namespace {

double st_coordinate_derivative(double t) {
  return 0.5 * (4.0 * t * t * t - 32.0 * t + 5.0);
}

}  // namespace

Objective st_objective(int dim) {
  if (dim <= 0) throw Error("dim-mismatch", "dimension must be positive");
  Objective obj;
  obj.dim = dim;
  obj.domain = Domain::cube(dim, -5.0, 5.0);
  const double inv_d = 1.0 / static_cast<double>(dim);
  obj.value_fn = [dim, inv_d](const double* theta) {
    const double total = blocked_sum(static_cast<std::size_t>(dim), [theta](std::size_t i) {
      return st_coordinate(theta[i]);
    });
    return total * inv_d;
  };
  obj.gradient_fn = [dim, inv_d](const double* theta, double* grad) {
    for (int i = 0; i < dim; ++i) grad[i] = st_coordinate_derivative(theta[i]) * inv_d;
  };
  obj.per_coordinate.reserve(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    obj.per_coordinate.push_back([inv_d](double t) { return st_coordinate(t) * inv_d; });
  }
  return obj;
}

}  // namespace gibbsinit
