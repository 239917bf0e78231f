#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gibbsinit/objective.hpp"

namespace gibbsinit {

struct GDConfig {
  double step = 0.05;
  std::uint64_t iterations = 50;
  bool record_trajectory = false;
};

struct Trajectory {
  std::vector<double> start;
  std::vector<double> final;
  double final_value = 0.0;
  // iterations + 1 entries (value at start, then after each step) when the
  // run is recorded and completes; truncated at divergence.
  std::vector<double> values;
  bool diverged = false;
};

// Projected gradient descent with a fixed step and iteration budget; no early
// stopping, final_value = obj(final). On a non-finite gradient or iterate the
// run stops with diverged = true and final = the last finite iterate.
Trajectory gd_run(const Objective& obj, const std::vector<double>& theta0, const GDConfig& cfg);

enum class StationaryClass { local_min, saddle_or_max, boundary, nonstationary };
std::string to_string(StationaryClass c);

// nonstationary if |grad| > grad_tol; else boundary within 1e-6 of the domain
// boundary; else local_min when the smallest Hessian eigenvalue exceeds
// eig_tol, saddle_or_max otherwise. Finite-difference Hessian, d <= 30.
StationaryClass classify_stationary(const Objective& obj, const std::vector<double>& theta,
                                    double grad_tol, double eig_tol);

// Central-difference Hessian (step 1e-4), symmetrized as (H + H^T)/2.
// Row-major d x d.
std::vector<double> fd_hessian(const Objective& obj, const std::vector<double>& theta,
                               double h = 1e-4);

// Eigenvalues of a symmetric row-major d x d matrix, ascending.
std::vector<double> symmetric_eigenvalues(const std::vector<double>& matrix, int d);

enum class SuccessMode { value_gap, point_distance };

// value_gap: final_value <= f_star + tol; point_distance: |final - theta_star| <= tol.
bool success_test(const Trajectory& traj, const std::vector<double>& theta_star, double f_star,
                  SuccessMode mode, double tol);

void write_trajectory_json(const Trajectory& t, const std::string& path);

}  // namespace gibbsinit
