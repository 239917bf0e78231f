#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gibbsinit/objective.hpp"
#include "gibbsinit/rng.hpp"

namespace gibbsinit {

// The Gibbs law pi_beta(theta) proportional to exp(-beta * F(theta)) restricted
// to F's domain; beta = 0 is the uniform law.
struct GibbsTarget {
  const Objective* objective = nullptr;
  double beta = 1.0;
};

struct ChainState {
  std::vector<double> position;
  std::uint64_t steps_taken = 0;
  std::uint64_t accepted = 0;          // RWM only
  bool nonfinite_proposal_seen = false;  // RWM diagnostic flag
};

struct SampleBatch {
  int dim = 0;
  std::vector<double> points;  // row-major, L x dim
  std::string provenance;      // ula | rwm | rejection | snis | uniform
  double beta = 0.0;
  std::uint64_t L = 0;
  std::uint64_t burnin = 0;
  std::uint64_t thinning = 1;
  std::uint64_t seed = 0;
  double acceptance_rate = 1.0;

  std::size_t size() const { return L; }
  const double* point(std::size_t i) const { return points.data() + i * (std::size_t)dim; }
};

// Default ULA step 1e-2/beta, clamped to [1e-6, 1e-2]: the drift scales with
// beta, so the step must shrink as the target sharpens.
double default_ula_step(double beta);

// position' = project(position - h*beta*grad(position) + sqrt(2h)*z).
void ula_step(ChainState& state, const GibbsTarget& target, double h, Rng& rng);

// Gaussian proposal, Metropolis accept exp(-beta*delta); proposals outside the
// domain or with non-finite objective are rejected (the latter sets the flag).
void rwm_step(ChainState& state, const GibbsTarget& target, double scale, Rng& rng);

enum class ChainMethod { ula, rwm };

struct ChainParams {
  double step = -1.0;  // ULA; negative means default_ula_step(beta)
  double scale = 0.5;  // RWM proposal standard deviation
};

// Discards burnin steps, then records every thinning-th position until L
// points are collected. Step errors are rethrown with the step index attached.
SampleBatch run_chain(ChainMethod method, const GibbsTarget& target, std::uint64_t L,
                      std::uint64_t burnin, std::uint64_t thinning,
                      const std::vector<double>& init, const ChainParams& params,
                      std::uint64_t seed);

// Exact i.i.d. sampling for targets that are sums of per-coordinate terms:
// uniform proposal on each axis, envelope exp(-beta*(f(t) - min f)). The
// per-axis minimum is located by a coarse grid plus local ternary refinement.
SampleBatch rejection_sample_separable(const std::vector<std::function<double(double)>>& per_coord_f,
                                       double beta, const Domain& box, std::uint64_t L,
                                       std::uint64_t seed);

// Self-normalized importance sampling: proposal_count uniform proposals,
// weights exp(-beta*(F - min F)), L draws with replacement by weight.
SampleBatch snis_resample(const GibbsTarget& target, std::uint64_t proposal_count,
                          std::uint64_t L, std::uint64_t seed);

SampleBatch uniform_sample(const Domain& domain, std::uint64_t L, std::uint64_t seed);

// CSV with columns coord_0..coord_{d-1} plus a JSON sidecar
// {method, beta, L, burnin, thinning, seed, acceptance_rate}.
void write_sample_batch(const SampleBatch& batch, const std::string& csv_path,
                        const std::string& sidecar_json_path);

}  // namespace gibbsinit
