#include "gibbsinit/theory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>

#include <nlohmann/json.hpp>

#include "gibbsinit/error.hpp"
#include "gibbsinit/fastmath.hpp"
#include "gibbsinit/io.hpp"
#include "gibbsinit/optimize.hpp"
#include "gibbsinit/parallel.hpp"

namespace gibbsinit {

double required_sample_size_real(double delta, double rho, int d, double C) {
  if (!(delta > 0.0)) throw Error("bad-theory-params", "delta must be positive");
  if (!(rho > 0.0 && rho < 1.0)) throw Error("bad-theory-params", "rho must lie in (0,1)");
  if (d < 1) throw Error("bad-theory-params", "dimension must be at least 1");
  if (!(C > 0.0)) throw Error("bad-theory-params", "constant C must be positive");
  return C * static_cast<double>(d) * std::log(1.0 / rho) / (delta * delta);
}

std::uint64_t required_sample_size(double delta, double rho, int d, double C) {
  const double real = required_sample_size_real(delta, rho, d, C);
  if (!(real < 9.0e18)) throw Error("bad-theory-params", "required sample size overflows");
  return static_cast<std::uint64_t>(std::ceil(real));
}

namespace {

struct GridAxes {
  std::vector<double> lo, hi;
  int res = 0;

  std::size_t total(int d) const {
    std::size_t t = 1;
    for (int k = 0; k < d; ++k) t *= static_cast<std::size_t>(res);
    return t;
  }
  double coord(int axis, std::size_t index) const {
    const auto a = static_cast<std::size_t>(axis);
    return lo[a] + (hi[a] - lo[a]) * static_cast<double>(index) /
                       static_cast<double>(res - 1);
  }
  void point(int d, std::size_t flat, double* out) const {
    for (int k = d - 1; k >= 0; --k) {
      out[k] = coord(k, flat % static_cast<std::size_t>(res));
      flat /= static_cast<std::size_t>(res);
    }
  }
};

GridAxes make_axes(const Domain& domain, int res) {
  GridAxes axes;
  axes.res = res;
  if (domain.kind == Domain::Kind::box) {
    axes.lo = domain.lo;
    axes.hi = domain.hi;
  } else {
    axes.lo.resize(static_cast<std::size_t>(domain.dim));
    axes.hi.resize(static_cast<std::size_t>(domain.dim));
    for (int k = 0; k < domain.dim; ++k) {
      axes.lo[static_cast<std::size_t>(k)] = domain.center[static_cast<std::size_t>(k)] - domain.radius;
      axes.hi[static_cast<std::size_t>(k)] = domain.center[static_cast<std::size_t>(k)] + domain.radius;
    }
  }
  return axes;
}

double operator_norm_gap(const std::vector<double>& ha, const std::vector<double>& hb, int d) {
  std::vector<double> diff(ha.size());
  for (std::size_t i = 0; i < ha.size(); ++i) diff[i] = ha[i] - hb[i];
  const std::vector<double> eig = symmetric_eigenvalues(diff, d);
  double norm = 0.0;
  for (double e : eig) norm = std::max(norm, std::fabs(e));
  return norm;
}

// Safeguarded 1-D Newton on the gradient inside a sign-change bracket.
double refine_root_1d(const Objective& obj, double a, double b) {
  auto grad = [&obj](double x) {
    double g = 0.0;
    obj.gradient_at(&x, &g);
    return g;
  };
  double ga = grad(a);
  if (ga == 0.0) return a;
  if (grad(b) == 0.0) return b;
  double x = 0.5 * (a + b);
  for (int it = 0; it < 100; ++it) {
    const double gx = grad(x);
    if (gx == 0.0) return x;
    if ((gx < 0.0) == (ga < 0.0)) {
      a = x;
      ga = gx;
    } else {
      b = x;
    }
    const double h = 1e-6 * (1.0 + std::fabs(x));
    const double deriv = (grad(x + h) - grad(x - h)) / (2.0 * h);
    double next = (deriv != 0.0) ? x - gx / deriv : 0.5 * (a + b);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    if (std::fabs(next - x) <= 1e-14 * (1.0 + std::fabs(x))) return next;
    x = next;
  }
  return x;
}

bool refine_root_2d(const Objective& obj, std::vector<double>& x, double grad_tol,
                    const Domain& domain) {
  for (int it = 0; it < 60; ++it) {
    double g[2];
    obj.gradient_at(x.data(), g);
    if (std::hypot(g[0], g[1]) <= grad_tol) return true;
    const std::vector<double> h = fd_hessian(obj, x, 1e-5);
    const double det = h[0] * h[3] - h[1] * h[2];
    if (!(std::fabs(det) > 1e-18)) return false;
    x[0] -= (h[3] * g[0] - h[1] * g[1]) / det;
    x[1] -= (-h[2] * g[0] + h[0] * g[1]) / det;
    if (!domain.contains(x)) return false;
  }
  double g[2];
  obj.gradient_at(x.data(), g);
  return std::hypot(g[0], g[1]) <= grad_tol;
}

double domain_diameter(const GridAxes& axes, int d) {
  double s = 0.0;
  for (int k = 0; k < d; ++k) {
    const double w = axes.hi[static_cast<std::size_t>(k)] - axes.lo[static_cast<std::size_t>(k)];
    s += w * w;
  }
  return std::sqrt(s);
}

void dedup_sorted_points(std::vector<std::vector<double>>& pts, double tol) {
  std::sort(pts.begin(), pts.end());
  std::vector<std::vector<double>> keep;
  for (auto& p : pts) {
    bool dup = false;
    for (const auto& k : keep) {
      double s = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) s += (p[i] - k[i]) * (p[i] - k[i]);
      if (std::sqrt(s) < tol) {
        dup = true;
        break;
      }
    }
    if (!dup) keep.push_back(p);
  }
  pts = std::move(keep);
}

}  // namespace

std::vector<std::vector<double>> stationary_points(const Objective& obj, int grid_resolution) {
  if (obj.dim < 1 || obj.dim > 2) {
    throw Error("bad-theory-params", "stationary-point search supports d <= 2");
  }
  if (obj.domain.kind != Domain::Kind::box) {
    throw Error("bad-theory-params", "stationary-point search needs a box domain");
  }
  if (grid_resolution < 50) {
    throw Error("bad-theory-params", "need at least 50 grid points per axis");
  }
  const GridAxes axes = make_axes(obj.domain, grid_resolution);
  const int d = obj.dim;
  const double diam = domain_diameter(axes, d);
  std::vector<std::vector<double>> roots;

  if (d == 1) {
    const auto res = static_cast<std::size_t>(grid_resolution);
    std::vector<double> g(res);
    parallel_for(res, [&](std::size_t i) {
      double x = axes.coord(0, i);
      obj.gradient_at(&x, &g[i]);
    });
    for (std::size_t i = 0; i + 1 < res; ++i) {
      const double a = axes.coord(0, i);
      const double b = axes.coord(0, i + 1);
      if (g[i] == 0.0) {
        roots.push_back({a});
      } else if (g[i] * g[i + 1] < 0.0) {
        roots.push_back({refine_root_1d(obj, a, b)});
      }
    }
    if (g[res - 1] == 0.0) roots.push_back({axes.coord(0, res - 1)});
  } else {
    const auto res = static_cast<std::size_t>(grid_resolution);
    std::vector<double> gx(res * res), gy(res * res);
    parallel_for(res * res, [&](std::size_t flat) {
      double x[2];
      axes.point(2, flat, x);
      double g[2];
      obj.gradient_at(x, g);
      gx[flat] = g[0];
      gy[flat] = g[1];
    });
    double gmax = 0.0;
    for (std::size_t i = 0; i < res * res; ++i) {
      gmax = std::max(gmax, std::hypot(gx[i], gy[i]));
    }
    const double grad_tol = 1e-9 * (1.0 + gmax);
    auto sign_change = [](double a, double b, double c, double e) {
      const auto mn = std::min(std::min(a, b), std::min(c, e));
      const auto mx = std::max(std::max(a, b), std::max(c, e));
      return mn <= 0.0 && mx >= 0.0;
    };
    for (std::size_t i = 0; i + 1 < res; ++i) {
      for (std::size_t j = 0; j + 1 < res; ++j) {
        const std::size_t c00 = i * res + j, c01 = i * res + j + 1;
        const std::size_t c10 = (i + 1) * res + j, c11 = (i + 1) * res + j + 1;
        if (!sign_change(gx[c00], gx[c01], gx[c10], gx[c11])) continue;
        if (!sign_change(gy[c00], gy[c01], gy[c10], gy[c11])) continue;
        std::vector<double> x{0.5 * (axes.coord(0, i) + axes.coord(0, i + 1)),
                              0.5 * (axes.coord(1, j) + axes.coord(1, j + 1))};
        if (refine_root_2d(obj, x, grad_tol, obj.domain)) roots.push_back(std::move(x));
      }
    }
  }

  // Keep interior points only; boundary contact is a projection artifact, not
  // a stationary point of the smooth objective.
  std::vector<std::vector<double>> interior;
  for (auto& r : roots) {
    if (obj.domain.contains(r) && obj.domain.boundary_distance(r) > 1e-9 * diam) {
      interior.push_back(std::move(r));
    }
  }
  dedup_sorted_points(interior, 1e-6 * diam);
  return interior;
}

ApproxReport measure_delta_approx(const Objective& reference, const Objective& approx,
                                  int grid_resolution, bool with_stationary) {
  if (reference.dim != approx.dim) {
    throw Error("dim-mismatch", "objectives must share a dimension");
  }
  const int d = reference.dim;
  if (d < 1 || d > 3) throw Error("bad-theory-params", "full grids support d <= 3");
  if (grid_resolution < 50) {
    throw Error("bad-theory-params", "need at least 50 grid points per axis");
  }
  if (with_stationary && d > 2) {
    throw Error("bad-theory-params", "stationary matching supports d <= 2");
  }

  const GridAxes axes = make_axes(reference.domain, grid_resolution);
  const std::size_t total = axes.total(d);
  std::vector<double> value_gap(total, 0.0), grad_gap(total, 0.0), hess_gap(total, 0.0);
  parallel_for(total, [&](std::size_t flat) {
    double x[3];
    axes.point(d, flat, x);
    if (!reference.domain.contains(x, static_cast<std::size_t>(d))) return;
    value_gap[flat] = std::fabs(reference.value_at(x) - approx.value_at(x));
    double ga[3], gb[3];
    reference.gradient_at(x, ga);
    approx.gradient_at(x, gb);
    double s = 0.0;
    for (int k = 0; k < d; ++k) s += (ga[k] - gb[k]) * (ga[k] - gb[k]);
    grad_gap[flat] = std::sqrt(s);
    const std::vector<double> theta(x, x + d);
    hess_gap[flat] = operator_norm_gap(fd_hessian(reference, theta), fd_hessian(approx, theta), d);
  });

  ApproxReport report;
  report.sup_value_gap = *std::max_element(value_gap.begin(), value_gap.end());
  report.sup_grad_gap = *std::max_element(grad_gap.begin(), grad_gap.end());
  report.sup_hessian_gap = *std::max_element(hess_gap.begin(), hess_gap.end());
  report.grid_spec = std::to_string(grid_resolution) + " points per axis, dim " + std::to_string(d);
  report.stationary_requested = with_stationary;

  if (with_stationary) {
    const auto ref_pts = stationary_points(reference, grid_resolution);
    const auto appr_pts = stationary_points(approx, grid_resolution);
    report.reference_stationary_count = ref_pts.size();
    report.approx_stationary_count = appr_pts.size();
    if (ref_pts.size() != appr_pts.size() || ref_pts.empty()) {
      report.stationary_mismatch = true;
    } else {
      double worst = 0.0;
      for (const auto& rp : ref_pts) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& ap : appr_pts) {
          double s = 0.0;
          for (std::size_t k = 0; k < rp.size(); ++k) s += (rp[k] - ap[k]) * (rp[k] - ap[k]);
          best = std::min(best, std::sqrt(s));
        }
        worst = std::max(worst, best);
      }
      report.max_stationary_displacement = worst;
    }
  }
  return report;
}

namespace {

ConcentrationReport quadrature_mass(const GibbsTarget& target, const std::vector<double>& center,
                                    double r, int grid_resolution, bool outside) {
  if (target.objective == nullptr) throw Error("bad-theory-params", "target has no objective");
  const Objective& obj = *target.objective;
  const int d = obj.dim;
  if (d < 1 || d > 2) throw Error("bad-theory-params", "quadrature supports d <= 2");
  if (grid_resolution < 2) throw Error("bad-theory-params", "need at least 2 grid points");
  if (!(r > 0.0)) throw Error("bad-theory-params", "region radius must be positive");
  if (!(target.beta >= 0.0)) throw Error("bad-theory-params", "beta must be nonnegative");
  obj.domain.check_width(center.size());

  const Domain& domain = obj.domain;
  if (domain.kind == Domain::Kind::box) {
    for (int k = 0; k < d; ++k) {
      const auto a = static_cast<std::size_t>(k);
      if (center[a] - r < domain.lo[a] || center[a] + r > domain.hi[a]) {
        throw Error("region-exceeds-domain", "ball of radius " + format_double(r) +
                                                 " does not fit inside the domain");
      }
    }
  } else {
    double s = 0.0;
    for (int k = 0; k < d; ++k) {
      const auto a = static_cast<std::size_t>(k);
      s += (center[a] - domain.center[a]) * (center[a] - domain.center[a]);
    }
    if (std::sqrt(s) + r > domain.radius) {
      throw Error("region-exceeds-domain", "ball of radius " + format_double(r) +
                                               " does not fit inside the domain");
    }
  }

  const GridAxes axes = make_axes(domain, grid_resolution);
  const std::size_t total = axes.total(d);
  std::vector<double> logw(total), weight(total), indicator(total);
  const auto res = static_cast<std::size_t>(grid_resolution);
  parallel_for(total, [&](std::size_t flat) {
    double x[2];
    axes.point(d, flat, x);
    if (!domain.contains(x, static_cast<std::size_t>(d))) {
      weight[flat] = 0.0;
      logw[flat] = -std::numeric_limits<double>::infinity();
      indicator[flat] = 0.0;
      return;
    }
    double w = 1.0;
    std::size_t rem = flat;
    for (int k = d - 1; k >= 0; --k) {
      const std::size_t idx = rem % res;
      rem /= res;
      const auto a = static_cast<std::size_t>(k);
      const double h = (axes.hi[a] - axes.lo[a]) / static_cast<double>(grid_resolution - 1);
      w *= (idx == 0 || idx == res - 1) ? 0.5 * h : h;
    }
    weight[flat] = w;
    logw[flat] = -target.beta * obj.value_at(x);
    double s = 0.0;
    for (int k = 0; k < d; ++k) s += (x[k] - center[static_cast<std::size_t>(k)]) *
                                     (x[k] - center[static_cast<std::size_t>(k)]);
    const bool in_ball = std::sqrt(s) <= r;
    indicator[flat] = (in_ball != outside) ? 1.0 : 0.0;
  });

  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < total; ++i) {
    if (weight[i] > 0.0) peak = std::max(peak, logw[i]);
  }
  std::vector<double> density(total);
  for (std::size_t i = 0; i < total; ++i) {
    density[i] = (weight[i] > 0.0) ? fast_exp(logw[i] - peak) * weight[i] : 0.0;
  }
  const double denom = blocked_sum(total, [&](std::size_t i) { return density[i]; });
  const double numer = blocked_sum(total, [&](std::size_t i) { return density[i] * indicator[i]; });
  if (!(denom > 0.0)) throw Error("weight-underflow", "normalizing constant vanished");

  ConcentrationReport report;
  report.beta = target.beta;
  report.mass_outside = numer / denom;
  report.center = center;
  report.radius = r;
  report.grid_resolution = grid_resolution;
  return report;
}

}  // namespace

ConcentrationReport concentration_mass(const GibbsTarget& target, const std::vector<double>& center,
                                       double r, int grid_resolution) {
  return quadrature_mass(target, center, r, grid_resolution, true);
}

ConcentrationReport concentration_mass_complement(const GibbsTarget& target,
                                                  const std::vector<double>& center, double r,
                                                  int grid_resolution) {
  return quadrature_mass(target, center, r, grid_resolution, false);
}

double miss_probability_bound(double pi_bc, double delta_beta, std::uint64_t L) {
  double base = std::clamp(pi_bc, 0.0, 1.0) + std::max(delta_beta, 0.0);
  if (base > 1.0) {
    std::cerr << "warning: miss bound base " << base << " clamped to 1\n";
    base = 1.0;
  }
  return std::pow(base, static_cast<double>(L));
}

double random_start_failure_bound(double p_ball, std::uint64_t m) {
  const double p = std::clamp(p_ball, 0.0, 1.0);
  return std::pow(1.0 - p, static_cast<double>(m));
}

std::vector<std::size_t> eps_global_set(const std::vector<StationaryValue>& stationary,
                                        double epsilon) {
  if (stationary.empty()) throw Error("no-data", "stationary list is empty");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : stationary) best = std::min(best, s.value);
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < stationary.size(); ++i) {
    if (stationary[i].value <= best + epsilon) kept.push_back(i);
  }
  return kept;
}

void write_approx_report_json(const ApproxReport& report, const std::string& path) {
  nlohmann::ordered_json j;
  j["sup_value_gap"] = report.sup_value_gap;
  j["sup_grad_gap"] = report.sup_grad_gap;
  j["sup_hessian_gap"] = report.sup_hessian_gap;
  j["stationary_requested"] = report.stationary_requested;
  if (report.stationary_requested) {
    j["stationary_mismatch"] = report.stationary_mismatch;
    j["reference_stationary_count"] = report.reference_stationary_count;
    j["approx_stationary_count"] = report.approx_stationary_count;
    if (!report.stationary_mismatch) {
      j["max_stationary_displacement"] = report.max_stationary_displacement;
    }
  }
  j["grid_spec"] = report.grid_spec;
  write_text_file(path, j.dump(2) + "\n");
}

void write_concentration_report_json(const ConcentrationReport& report, const std::string& path) {
  nlohmann::ordered_json j;
  j["beta"] = report.beta;
  j["mass_outside"] = report.mass_outside;
  j["center"] = report.center;
  j["radius"] = report.radius;
  j["grid_resolution"] = report.grid_resolution;
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace gibbsinit
