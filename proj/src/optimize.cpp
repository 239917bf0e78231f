#include "gibbsinit/optimize.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "gibbsinit/error.hpp"
#include "gibbsinit/io.hpp"

namespace gibbsinit {

namespace {

bool all_finite(const std::vector<double>& x) {
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace

Trajectory gd_run(const Objective& obj, const std::vector<double>& theta0, const GDConfig& cfg) {
  obj.domain.check_width(theta0.size());
  const int d = obj.dim;

  Trajectory traj;
  traj.start = theta0;
  std::vector<double> theta = obj.domain.project(theta0);
  std::vector<double> g(d);

  if (cfg.record_trajectory) {
    traj.values.reserve(cfg.iterations + 1);
    traj.values.push_back(obj.value_at(theta.data()));
  }

  for (std::uint64_t k = 0; k < cfg.iterations; ++k) {
    obj.gradient_at(theta.data(), g.data());
    if (!all_finite(g)) {
      traj.diverged = true;
      break;
    }
    std::vector<double> next = theta;
    for (int i = 0; i < d; ++i) next[i] -= cfg.step * g[i];
    obj.domain.project_inplace(next.data(), d);
    if (!all_finite(next)) {
      traj.diverged = true;
      break;
    }
    theta = std::move(next);
    if (cfg.record_trajectory) traj.values.push_back(obj.value_at(theta.data()));
  }

  traj.final = theta;
  traj.final_value = obj.value_at(theta.data());
  if (!std::isfinite(traj.final_value)) traj.diverged = true;
  return traj;
}

std::string to_string(StationaryClass c) {
  switch (c) {
    case StationaryClass::local_min: return "local_min";
    case StationaryClass::saddle_or_max: return "saddle_or_max";
    case StationaryClass::boundary: return "boundary";
    case StationaryClass::nonstationary: return "nonstationary";
  }
  return "unknown";
}

std::vector<double> fd_hessian(const Objective& obj, const std::vector<double>& theta, double h) {
  obj.domain.check_width(theta.size());
  const int d = obj.dim;
  std::vector<double> H((std::size_t)d * d);
  std::vector<double> t = theta;
  auto f = [&](const std::vector<double>& x) { return obj.value_at(x.data()); };
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      double hij;
      if (i == j) {
        double c = f(t);
        t[i] = theta[i] + h;
        double fp = f(t);
        t[i] = theta[i] - h;
        double fm = f(t);
        t[i] = theta[i];
        hij = (fp - 2.0 * c + fm) / (h * h);
      } else {
        t[i] = theta[i] + h;
        t[j] = theta[j] + h;
        double fpp = f(t);
        t[j] = theta[j] - h;
        double fpm = f(t);
        t[i] = theta[i] - h;
        t[j] = theta[j] + h;
        double fmp = f(t);
        t[j] = theta[j] - h;
        double fmm = f(t);
        t[i] = theta[i];
        t[j] = theta[j];
        hij = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
      }
      H[(std::size_t)i * d + j] = hij;
      H[(std::size_t)j * d + i] = hij;
    }
  }
  return H;
}

std::vector<double> symmetric_eigenvalues(const std::vector<double>& matrix, int d) {
  Eigen::MatrixXd M(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) M(i, j) = matrix[(std::size_t)i * d + j];
  Eigen::MatrixXd S = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(S, Eigen::EigenvaluesOnly);
  std::vector<double> ev(d);
  for (int i = 0; i < d; ++i) ev[i] = solver.eigenvalues()[i];
  return ev;
}

StationaryClass classify_stationary(const Objective& obj, const std::vector<double>& theta,
                                    double grad_tol, double eig_tol) {
  obj.domain.check_width(theta.size());
  if (obj.dim > 30)
    throw Error("dim-too-large", "finite-difference Hessian classification is capped at d=30");
  std::vector<double> g = obj.gradient(theta);
  double norm = 0.0;
  for (double v : g) norm += v * v;
  if (std::sqrt(norm) > grad_tol) return StationaryClass::nonstationary;
  if (obj.domain.boundary_distance(theta) <= 1e-6) return StationaryClass::boundary;
  auto ev = symmetric_eigenvalues(fd_hessian(obj, theta), obj.dim);
  return ev.front() > eig_tol ? StationaryClass::local_min : StationaryClass::saddle_or_max;
}

bool success_test(const Trajectory& traj, const std::vector<double>& theta_star, double f_star,
                  SuccessMode mode, double tol) {
  if (mode == SuccessMode::value_gap) return traj.final_value <= f_star + tol;
  double d2 = 0.0;
  for (std::size_t i = 0; i < theta_star.size(); ++i) {
    double d = traj.final[i] - theta_star[i];
    d2 += d * d;
  }
  return std::sqrt(d2) <= tol;
}

void write_trajectory_json(const Trajectory& t, const std::string& path) {
  nlohmann::ordered_json j;
  j["start"] = t.start;
  j["final"] = t.final;
  j["final_value"] = t.final_value;
  j["diverged"] = t.diverged;
  if (!t.values.empty()) j["values"] = t.values;
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace gibbsinit
