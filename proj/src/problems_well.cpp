#include "gibbsinit/problems.hpp"

#include <cmath>

#include "gibbsinit/error.hpp"

namespace gibbsinit {

Objective double_well_1d(double gap, double radius_scale) {
  if (!(gap >= 0.0) || !(gap < 16.0 / 3.0)) {
    throw Error("bad-theory-params", "well gap must lie in [0, 16/3)");
  }
  if (!(radius_scale > 1.0)) {
    throw Error("bad-theory-params", "domain half-width must exceed the well positions");
  }
  const double c = gap / 4.0;
  Objective obj;
  obj.dim = 1;
  obj.domain = Domain::cube(1, -radius_scale, radius_scale);
  auto f = [c](double t) {
    const double w = t * t - 1.0;
    return w * w + c * (t * t * t - 3.0 * t);
  };
  // F'(t) = (t^2 - 1) * (4 t + 3 c): stationary at -1, -3c/4, +1 exactly.
  obj.value_fn = [f](const double* theta) { return f(theta[0]); };
  obj.gradient_fn = [c](const double* theta, double* grad) {
    const double t = theta[0];
    grad[0] = (t * t - 1.0) * (4.0 * t + 3.0 * c);
  };
  obj.per_coordinate.push_back(f);
  return obj;
}

}  // namespace gibbsinit
