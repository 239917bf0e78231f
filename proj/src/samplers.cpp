#include "gibbsinit/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "gibbsinit/error.hpp"
#include "gibbsinit/fastmath.hpp"
#include "gibbsinit/io.hpp"

namespace gibbsinit {

namespace {

bool all_finite(const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(x[i])) return false;
  return true;
}

}  // namespace

double default_ula_step(double beta) {
  double h = beta > 0.0 ? 1e-2 / beta : 1e-2;
  return std::clamp(h, 1e-6, 1e-2);
}

void ula_step(ChainState& state, const GibbsTarget& target, double h, Rng& rng) {
  const Objective& obj = *target.objective;
  const int d = obj.dim;
  std::vector<double> g(d);
  obj.gradient_at(state.position.data(), g.data());
  if (!all_finite(g.data(), d))
    throw Error("diverged-gradient", "non-finite gradient in ULA step");
  const double noise = std::sqrt(2.0 * h);
  for (int i = 0; i < d; ++i)
    state.position[i] += -h * target.beta * g[i] + noise * rng.gaussian();
  obj.domain.project_inplace(state.position.data(), d);
  ++state.steps_taken;
}

void rwm_step(ChainState& state, const GibbsTarget& target, double scale, Rng& rng) {
  const Objective& obj = *target.objective;
  const int d = obj.dim;
  std::vector<double> prop(d);
  for (int i = 0; i < d; ++i) prop[i] = state.position[i] + scale * rng.gaussian();
  ++state.steps_taken;
  // Draw the acceptance uniform unconditionally so the consumed stream does
  // not depend on the rejection path (easier to reason about determinism).
  const double u = rng.uniform();
  if (!obj.domain.contains(prop.data(), d)) return;  // zero density outside
  const double f_prop = obj.value_at(prop.data());
  if (!std::isfinite(f_prop)) {
    state.nonfinite_proposal_seen = true;
    return;
  }
  const double f_cur = obj.value_at(state.position.data());
  const double log_accept = -target.beta * (f_prop - f_cur);
  if (log_accept >= 0.0 || u < fast_exp(log_accept)) {
    state.position = std::move(prop);
    ++state.accepted;
  }
}

SampleBatch run_chain(ChainMethod method, const GibbsTarget& target, std::uint64_t L,
                      std::uint64_t burnin, std::uint64_t thinning,
                      const std::vector<double>& init, const ChainParams& params,
                      std::uint64_t seed) {
  const Objective& obj = *target.objective;
  obj.domain.check_width(init.size());
  if (L < 1) throw Error("bad-subsample-size", "run_chain needs L >= 1");
  if (thinning < 1) throw Error("bad-subsample-size", "run_chain needs thinning >= 1");

  ChainState state;
  state.position = obj.domain.project(init);
  Rng rng(seed);
  const double h = params.step >= 0.0 ? params.step : default_ula_step(target.beta);

  SampleBatch batch;
  batch.dim = obj.dim;
  batch.provenance = method == ChainMethod::ula ? "ula" : "rwm";
  batch.beta = target.beta;
  batch.L = L;
  batch.burnin = burnin;
  batch.thinning = thinning;
  batch.seed = seed;
  batch.points.reserve(L * (std::size_t)obj.dim);

  auto step = [&](std::uint64_t index) {
    try {
      if (method == ChainMethod::ula)
        ula_step(state, target, h, rng);
      else
        rwm_step(state, target, params.scale, rng);
    } catch (const Error& e) {
      throw Error(e.code(), std::string(e.what()) + " (at chain step " +
                                std::to_string(index) + ")");
    }
  };

  std::uint64_t index = 0;
  for (std::uint64_t i = 0; i < burnin; ++i) step(index++);
  for (std::uint64_t k = 0; k < L; ++k) {
    for (std::uint64_t t = 0; t < thinning; ++t) step(index++);
    batch.points.insert(batch.points.end(), state.position.begin(), state.position.end());
  }
  batch.acceptance_rate =
      method == ChainMethod::rwm && state.steps_taken > 0
          ? double(state.accepted) / double(state.steps_taken)
          : 1.0;
  return batch;
}

namespace {

// Minimum of f on [lo, hi]: coarse grid, then ternary refinement around the
// best cell. Good to ~1e-12 in argument for the smooth objectives used here.
double min_on_interval(const std::function<double(double)>& f, double lo, double hi) {
  constexpr int kGrid = 2048;
  double best_t = lo, best_v = f(lo);
  for (int i = 1; i <= kGrid; ++i) {
    double t = lo + (hi - lo) * double(i) / kGrid;
    double v = f(t);
    if (v < best_v) {
      best_v = v;
      best_t = t;
    }
  }
  double cell = (hi - lo) / kGrid;
  double a = std::max(lo, best_t - cell), b = std::min(hi, best_t + cell);
  for (int it = 0; it < 200 && b - a > 1e-13 * (1.0 + std::fabs(a)); ++it) {
    double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
    if (f(m1) <= f(m2))
      b = m2;
    else
      a = m1;
  }
  return std::min(best_v, f(0.5 * (a + b)));
}

}  // namespace

SampleBatch rejection_sample_separable(
    const std::vector<std::function<double(double)>>& per_coord_f, double beta,
    const Domain& box, std::uint64_t L, std::uint64_t seed) {
  if (box.kind != Domain::Kind::box)
    throw Error("dim-mismatch", "separable rejection sampling needs a box domain");
  box.check_width(per_coord_f.size());
  const int d = box.dim;

  std::vector<double> fmin(d);
  for (int i = 0; i < d; ++i) fmin[i] = min_on_interval(per_coord_f[i], box.lo[i], box.hi[i]);

  Rng rng(seed);
  SampleBatch batch;
  batch.dim = d;
  batch.provenance = "rejection";
  batch.beta = beta;
  batch.L = L;
  batch.seed = seed;
  batch.points.resize(L * (std::size_t)d);

  std::uint64_t proposals = 0, accepts = 0;
  // A rate below 1e-6 trips after ~2e7 consecutive rejections of one draw.
  constexpr std::uint64_t kGiveUp = 20000000;
  for (std::uint64_t k = 0; k < L; ++k) {
    for (int i = 0; i < d; ++i) {
      std::uint64_t tries = 0;
      for (;;) {
        double t = rng.uniform(box.lo[i], box.hi[i]);
        double u = rng.uniform();
        ++proposals;
        if (++tries > kGiveUp)
          throw Error("envelope-too-loose",
                      "rejection acceptance rate below 1e-6; use snis_resample instead");
        if (u < fast_exp(-beta * (per_coord_f[i](t) - fmin[i]))) {
          batch.points[k * (std::size_t)d + i] = t;
          ++accepts;
          break;
        }
      }
    }
  }
  batch.acceptance_rate = proposals > 0 ? double(accepts) / double(proposals) : 1.0;
  return batch;
}

SampleBatch snis_resample(const GibbsTarget& target, std::uint64_t proposal_count,
                          std::uint64_t L, std::uint64_t seed) {
  const Objective& obj = *target.objective;
  if (proposal_count < L)
    throw Error("bad-subsample-size", "snis_resample needs proposal_count >= L");
  const int d = obj.dim;

  Rng rng(seed);
  std::vector<double> proposals(proposal_count * (std::size_t)d);
  for (std::uint64_t i = 0; i < proposal_count; ++i) {
    auto p = obj.domain.sample_uniform(rng);
    std::copy(p.begin(), p.end(), proposals.begin() + i * (std::size_t)d);
  }

  std::vector<double> loss(proposal_count);
  for (std::uint64_t i = 0; i < proposal_count; ++i)
    loss[i] = obj.value_at(proposals.data() + i * (std::size_t)d);

  // Shift by the minimum before exponentiating: weights are then invariant to
  // adding any constant to the objective, and the largest weight is exactly 1.
  double m = loss[0];
  bool any_finite = false;
  for (double v : loss) {
    if (std::isfinite(v)) {
      m = any_finite ? std::min(m, v) : v;
      any_finite = true;
    }
  }
  if (!any_finite)
    throw Error("weight-underflow", "all proposal losses are non-finite");

  std::vector<double> cumulative(proposal_count);
  double total = 0.0;
  for (std::uint64_t i = 0; i < proposal_count; ++i) {
    double w = std::isfinite(loss[i]) ? fast_exp(-target.beta * (loss[i] - m)) : 0.0;
    total += w;
    cumulative[i] = total;
  }
  if (!(total > 0.0) || !std::isfinite(total))
    throw Error("weight-underflow", "importance weights sum to zero or overflow");

  SampleBatch batch;
  batch.dim = d;
  batch.provenance = "snis";
  batch.beta = target.beta;
  batch.L = L;
  batch.seed = seed;
  batch.points.resize(L * (std::size_t)d);
  for (std::uint64_t k = 0; k < L; ++k) {
    double u = rng.uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    std::size_t idx = std::min<std::size_t>(it - cumulative.begin(), proposal_count - 1);
    const double* src = proposals.data() + idx * (std::size_t)d;
    std::copy(src, src + d, batch.points.begin() + k * (std::size_t)d);
  }
  batch.acceptance_rate = 1.0;
  return batch;
}

SampleBatch uniform_sample(const Domain& domain, std::uint64_t L, std::uint64_t seed) {
  Rng rng(seed);
  SampleBatch batch;
  batch.dim = domain.dim;
  batch.provenance = "uniform";
  batch.beta = 0.0;
  batch.L = L;
  batch.seed = seed;
  batch.points.reserve(L * (std::size_t)domain.dim);
  for (std::uint64_t i = 0; i < L; ++i) {
    auto p = domain.sample_uniform(rng);
    batch.points.insert(batch.points.end(), p.begin(), p.end());
  }
  return batch;
}

void write_sample_batch(const SampleBatch& batch, const std::string& csv_path,
                        const std::string& sidecar_json_path) {
  std::string out;
  for (int i = 0; i < batch.dim; ++i) {
    if (i) out += ',';
    out += "coord_" + std::to_string(i);
  }
  out += '\n';
  for (std::size_t k = 0; k < batch.size(); ++k) {
    const double* p = batch.point(k);
    for (int i = 0; i < batch.dim; ++i) {
      if (i) out += ',';
      out += format_double(p[i]);
    }
    out += '\n';
  }
  write_text_file(csv_path, out);

  nlohmann::ordered_json j;
  j["method"] = batch.provenance;
  j["beta"] = batch.beta;
  j["L"] = batch.L;
  j["burnin"] = batch.burnin;
  j["thinning"] = batch.thinning;
  j["seed"] = batch.seed;
  j["acceptance_rate"] = batch.acceptance_rate;
  write_text_file(sidecar_json_path, j.dump(2) + "\n");
}

}  // namespace gibbsinit
