#include "gibbsinit/objective.hpp"

#include <cmath>
#include <memory>
#include <string>

#include "gibbsinit/error.hpp"
#include "gibbsinit/parallel.hpp"

namespace gibbsinit {

double Objective::value(const std::vector<double>& theta) const {
  domain.check_width(theta.size());
  return value_fn(theta.data());
}

void Objective::gradient_at(const double* theta, double* out) const {
  if (gradient_fn) {
    gradient_fn(theta, out);
    return;
  }
  // Central-difference fallback.
  std::vector<double> t(theta, theta + dim);
  for (int i = 0; i < dim; ++i) {
    double h = 1e-6 * (1.0 + std::fabs(theta[i]));
    double orig = t[i];
    t[i] = orig + h;
    double fp = value_fn(t.data());
    t[i] = orig - h;
    double fm = value_fn(t.data());
    t[i] = orig;
    out[i] = (fp - fm) / (2.0 * h);
  }
}

std::vector<double> Objective::gradient(const std::vector<double>& theta) const {
  domain.check_width(theta.size());
  std::vector<double> g(dim);
  gradient_at(theta.data(), g.data());
  return g;
}

Objective empirical_loss(const Dataset& data, const PointwiseLoss& loss, const Domain& domain) {
  if (data.size() == 0) throw Error("empty-dataset", "empirical loss needs at least one point");
  auto shared = std::make_shared<const Dataset>(data);
  const std::size_t n = shared->size();
  const double inv_n = 1.0 / double(n);

  Objective obj;
  obj.dim = domain.dim;
  obj.domain = domain;
  obj.deterministic = true;
  obj.value_fn = [shared, loss, n, inv_n](const double* theta) {
    double s = blocked_sum(n, [&](std::size_t i) { return loss.value(theta, shared->row(i)); });
    return s * inv_n;
  };
  if (loss.gradient) {
    int dim = domain.dim;
    obj.gradient_fn = [shared, loss, n, inv_n, dim](const double* theta, double* out) {
      std::vector<double> g = blocked_vector_sum(
          n, (std::size_t)dim, [&](std::size_t i, double* acc) {
            double gi[64];
            std::vector<double> big;
            double* slot = gi;
            if (dim > 64) {
              big.resize(dim);
              slot = big.data();
            }
            loss.gradient(theta, shared->row(i), slot);
            for (int j = 0; j < dim; ++j) acc[j] += slot[j];
          });
      for (int j = 0; j < dim; ++j) out[j] = g[j] * inv_n;
    };
  }
  return obj;
}

Dataset subsample(const Dataset& data, std::size_t n, std::uint64_t seed) {
  const std::size_t total = data.size();
  if (n < 1 || n > total)
    throw Error("bad-subsample-size",
                "requested " + std::to_string(n) + " of " + std::to_string(total));
  // Partial Fisher-Yates over an index array; first n slots are the draw.
  std::vector<std::size_t> idx(total);
  for (std::size_t i = 0; i < total; ++i) idx[i] = i;
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = i + (std::size_t)rng.below(total - i);
    std::swap(idx[i], idx[j]);
  }
  Dataset out;
  out.dim = data.dim;
  out.values.reserve(n * (std::size_t)data.dim);
  for (std::size_t i = 0; i < n; ++i) out.push_row(data.row(idx[i]));
  return out;
}

double fd_gradient_check(const Objective& obj, const std::vector<double>& theta, double h) {
  obj.domain.check_width(theta.size());
  if (!(h > 0.0)) throw Error("boundary-point", "finite-difference step must be positive");
  if (!(obj.domain.boundary_distance(theta) > 0.0))
    throw Error("boundary-point", "gradient check requires a strictly interior point");
  std::vector<double> g(obj.dim);
  obj.gradient_at(theta.data(), g.data());
  std::vector<double> t = theta;
  double worst = 0.0;
  for (int i = 0; i < obj.dim; ++i) {
    double orig = t[i];
    t[i] = orig + h;
    double fp = obj.value_fn(t.data());
    t[i] = orig - h;
    double fm = obj.value_fn(t.data());
    t[i] = orig;
    worst = std::max(worst, std::fabs((fp - fm) / (2.0 * h) - g[i]));
  }
  return worst;
}

}  // namespace gibbsinit
