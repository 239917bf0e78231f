#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gibbsinit/objective.hpp"
#include "gibbsinit/samplers.hpp"

namespace gibbsinit {

// ceil(C * d * ln(1/rho) / delta^2): points needed so a subsample of that size
// tracks the population objective to accuracy delta with confidence 1 - rho.
// The absolute value is order-of-magnitude only (C is user-supplied).
std::uint64_t required_sample_size(double delta, double rho, int d, double C);

// Pre-ceiling value; exactly linear in C and exactly quartic under halving of
// delta, which the scaling tests assert.
double required_sample_size_real(double delta, double rho, int d, double C);

// How far an approximation sits from its reference over a full grid: sup gaps
// in value, gradient norm, and Hessian operator norm, plus (optionally, d <= 2)
// the worst displacement between paired interior stationary points.
struct ApproxReport {
  double sup_value_gap = 0.0;
  double sup_grad_gap = 0.0;
  double sup_hessian_gap = 0.0;
  bool stationary_requested = false;
  // Set when the two objectives have different interior stationary-point
  // counts; displacement is then meaningless and left at 0.
  bool stationary_mismatch = false;
  double max_stationary_displacement = 0.0;
  std::size_t reference_stationary_count = 0;
  std::size_t approx_stationary_count = 0;
  std::string grid_spec;
};

// Grids the shared domain at grid_resolution points per axis (>= 50, d <= 3;
// stationary matching requires d <= 2). Hessians by central differences,
// operator norm via eigenvalues of the difference.
ApproxReport measure_delta_approx(const Objective& reference, const Objective& approx,
                                  int grid_resolution, bool with_stationary);

// Interior stationary points found by sign changes of the gradient on a grid
// and polished by Newton steps; sorted ascending (lexicographic for d = 2).
std::vector<std::vector<double>> stationary_points(const Objective& obj, int grid_resolution);

struct ConcentrationReport {
  double beta = 0.0;
  double mass_outside = 0.0;  // pi_beta(complement of B_r(center))
  std::vector<double> center;
  double radius = 0.0;
  int grid_resolution = 0;
};

// Trapezoidal quadrature of the Gibbs mass outside the ball B_r(center),
// max-subtracted for stability; d <= 2. The ball must fit inside the domain.
ConcentrationReport concentration_mass(const GibbsTarget& target,
                                       const std::vector<double>& center, double r,
                                       int grid_resolution);

// Same grid, complementary indicator; inside + outside = 1 by construction.
ConcentrationReport concentration_mass_complement(const GibbsTarget& target,
                                                  const std::vector<double>& center, double r,
                                                  int grid_resolution);

// (pi_Bc + delta_beta)^L: chance that none of L approximate Gibbs samples
// lands in the good region. Sums above 1 clamp to a bound of 1.
double miss_probability_bound(double pi_bc, double delta_beta, std::uint64_t L);

// (1 - p_ball)^m: chance that m uniform starts all miss the attraction region.
double random_start_failure_bound(double p_ball, std::uint64_t m);

struct StationaryValue {
  std::vector<double> point;
  double value = 0.0;
};

// Indices whose value is within epsilon of the smallest value in the list.
std::vector<std::size_t> eps_global_set(const std::vector<StationaryValue>& stationary,
                                        double epsilon);

void write_approx_report_json(const ApproxReport& report, const std::string& path);
void write_concentration_report_json(const ConcentrationReport& report, const std::string& path);

}  // namespace gibbsinit
