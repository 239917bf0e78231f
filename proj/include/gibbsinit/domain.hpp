#pragma once

#include <vector>

#include "gibbsinit/rng.hpp"

namespace gibbsinit {

// Half-width of the box standing in for "unconstrained" problems; one
// projection mechanism then covers every experiment.
inline constexpr double kUnconstrainedHalfWidth = 1e6;

// Feasible sets: Euclidean balls and axis-aligned boxes.
struct Domain {
  enum class Kind { ball, box };

  Kind kind = Kind::box;
  int dim = 0;
  std::vector<double> center;  // ball only
  double radius = 0.0;         // ball only
  std::vector<double> lo, hi;  // box only

  static Domain ball(std::vector<double> center, double radius);
  static Domain box(std::vector<double> lo, std::vector<double> hi);
  static Domain cube(int dim, double lo, double hi);
  static Domain unconstrained(int dim);

  bool contains(const double* theta, std::size_t width) const;
  bool contains(const std::vector<double>& theta) const;

  // Ball: radial rescale onto the boundary when outside; box: per-coordinate
  // clamp. Idempotent.
  void project_inplace(double* theta, std::size_t width) const;
  std::vector<double> project(std::vector<double> theta) const;

  // Nonnegative inside the domain, 0 on the boundary; used by interior checks
  // and the stationary-point classifier.
  double boundary_distance(const std::vector<double>& theta) const;

  double volume() const;

  // Uniform draw: box per-coordinate; ball by Gaussian direction and radius
  // R * U^(1/d), so the law is uniform in volume.
  std::vector<double> sample_uniform(Rng& rng) const;

  // Throws "dim-mismatch" unless width == dim.
  void check_width(std::size_t width) const;
};

}  // namespace gibbsinit
