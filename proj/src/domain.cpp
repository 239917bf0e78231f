#include "gibbsinit/domain.hpp"

#include <cmath>
#include <string>

#include "gibbsinit/error.hpp"

namespace gibbsinit {

namespace {

// Shared by the containment check and the projection so both measure the
// radius with identical arithmetic; projection idempotence depends on it.
double offset_r2(const double* theta, const double* center, int dim) {
  double r2 = 0.0;
  for (int i = 0; i < dim; ++i) {
    double d = theta[i] - center[i];
    r2 += d * d;
  }
  return r2;
}

}  // namespace

Domain Domain::ball(std::vector<double> center, double radius) {
  if (center.empty()) throw Error("dim-mismatch", "ball center must be nonempty");
  if (!(radius > 0.0)) throw Error("dim-mismatch", "ball radius must be positive");
  Domain d;
  d.kind = Kind::ball;
  d.dim = (int)center.size();
  d.center = std::move(center);
  d.radius = radius;
  return d;
}

Domain Domain::box(std::vector<double> lo, std::vector<double> hi) {
  if (lo.empty() || lo.size() != hi.size())
    throw Error("dim-mismatch", "box bounds must be nonempty and equal width");
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (!(lo[i] < hi[i]))
      throw Error("dim-mismatch", "box requires lo < hi in coordinate " + std::to_string(i));
  Domain d;
  d.kind = Kind::box;
  d.dim = (int)lo.size();
  d.lo = std::move(lo);
  d.hi = std::move(hi);
  return d;
}

Domain Domain::cube(int dim, double lo, double hi) {
  return box(std::vector<double>(dim, lo), std::vector<double>(dim, hi));
}

Domain Domain::unconstrained(int dim) {
  return cube(dim, -kUnconstrainedHalfWidth, kUnconstrainedHalfWidth);
}

void Domain::check_width(std::size_t width) const {
  if ((int)width != dim)
    throw Error("dim-mismatch", "expected width " + std::to_string(dim) + ", got " +
                                    std::to_string(width));
}

bool Domain::contains(const double* theta, std::size_t width) const {
  check_width(width);
  if (kind == Kind::box) {
    for (int i = 0; i < dim; ++i)
      if (theta[i] < lo[i] || theta[i] > hi[i]) return false;
    return true;
  }
  return offset_r2(theta, center.data(), dim) <= radius * radius * (1.0 + 1e-15);
}

bool Domain::contains(const std::vector<double>& theta) const {
  return contains(theta.data(), theta.size());
}

void Domain::project_inplace(double* theta, std::size_t width) const {
  check_width(width);
  if (kind == Kind::box) {
    for (int i = 0; i < dim; ++i) {
      if (theta[i] < lo[i]) theta[i] = lo[i];
      if (theta[i] > hi[i]) theta[i] = hi[i];
    }
    return;
  }
  const double r2 = offset_r2(theta, center.data(), dim);
  if (r2 <= radius * radius) return;
  // Rescale onto the boundary, then shave ulps off the scale until the result
  // passes the same early-out test a second call would take: that makes
  // project(project(x)) == project(x) bit for bit.
  double scale = radius / std::sqrt(r2);
  std::vector<double> cand(dim);
  for (int attempt = 0; attempt < 64; ++attempt) {
    for (int i = 0; i < dim; ++i) cand[i] = center[i] + (theta[i] - center[i]) * scale;
    if (offset_r2(cand.data(), center.data(), dim) <= radius * radius) break;
    scale *= 1.0 - 4.0 * 2.220446049250313e-16;
  }
  for (int i = 0; i < dim; ++i) theta[i] = cand[i];
}

std::vector<double> Domain::project(std::vector<double> theta) const {
  project_inplace(theta.data(), theta.size());
  return theta;
}

double Domain::boundary_distance(const std::vector<double>& theta) const {
  check_width(theta.size());
  if (kind == Kind::ball) {
    double r2 = 0.0;
    for (int i = 0; i < dim; ++i) {
      double d = theta[i] - center[i];
      r2 += d * d;
    }
    return radius - std::sqrt(r2);
  }
  double best = hi[0] - lo[0];
  for (int i = 0; i < dim; ++i) {
    best = std::min(best, theta[i] - lo[i]);
    best = std::min(best, hi[i] - theta[i]);
  }
  return best;
}

double Domain::volume() const {
  if (kind == Kind::box) {
    double v = 1.0;
    for (int i = 0; i < dim; ++i) v *= hi[i] - lo[i];
    return v;
  }
  // Unit-ball volume pi^(d/2) / Gamma(d/2 + 1), scaled by radius^d.
  double logv = 0.5 * dim * std::log(3.14159265358979323846) - std::lgamma(0.5 * dim + 1.0) +
                dim * std::log(radius);
  return std::exp(logv);
}

std::vector<double> Domain::sample_uniform(Rng& rng) const {
  std::vector<double> p(dim);
  if (kind == Kind::box) {
    for (int i = 0; i < dim; ++i) p[i] = rng.uniform(lo[i], hi[i]);
    return p;
  }
  double norm2 = 0.0;
  for (int i = 0; i < dim; ++i) {
    p[i] = rng.gaussian();
    norm2 += p[i] * p[i];
  }
  double norm = std::sqrt(norm2);
  if (norm == 0.0) norm = 1.0;
  double r = radius * std::pow(rng.uniform(), 1.0 / dim);
  for (int i = 0; i < dim; ++i) p[i] = center[i] + p[i] * (r / norm);
  return p;
}

}  // namespace gibbsinit
