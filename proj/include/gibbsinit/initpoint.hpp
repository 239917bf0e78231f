#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gibbsinit/objective.hpp"
#include "gibbsinit/optimize.hpp"
#include "gibbsinit/samplers.hpp"

namespace gibbsinit {

struct SamplerSpec {
  std::string method = "ula";  // ula | rwm | rejection | snis | uniform
  double step = -1.0;          // ULA step; negative uses default_ula_step(beta)
  double scale = 0.5;          // RWM proposal standard deviation
  std::uint64_t burnin = 1000;
  std::uint64_t thinning = 10;
  std::uint64_t proposal_count = 100000;  // SNIS
  // Chain start: "uniform" draws it from the domain; "data_mode" starts at the
  // kernel-density argmax of the outsourced points (bandwidth below).
  std::string chain_init = "uniform";
  double chain_init_bandwidth = 0.3;
};

struct InitPlan {
  std::string strategy = "random";  // random | sips | oips_annealing | oips_sao
  std::uint64_t n_outsourced = 0;
  double beta = 1.0;
  std::uint64_t L = 1;
  SamplerSpec sampler;
  GDConfig inner_optimizer{0.05, 100, false};  // SAO's inner descent, on F-hat
  std::uint64_t seed = 0;
  std::uint64_t multistart_m = 1;  // random baseline only
  // Resolved chain start; set by the harness (or the data_mode helper) and
  // used instead of a uniform draw when nonempty.
  std::vector<double> chain_init_point;
};

struct CandidateSet {
  int dim = 0;
  std::vector<double> points;  // row-major; L points for random/sips, 1 for oips
  std::vector<double> scores;  // empirical-loss scores aligned with points
  int selected_index = -1;     // -1 when no selection applies (random, sips)
  std::string strategy;
  std::uint64_t excluded = 0;  // SAO candidates dropped for divergence

  std::size_t size() const { return dim > 0 ? points.size() / dim : 0; }
  const double* point(std::size_t i) const { return points.data() + i * (std::size_t)dim; }
};

// m i.i.d. uniform domain points.
CandidateSet random_start(const Domain& domain, std::uint64_t m, std::uint64_t seed);

// Index of the point with the highest Gaussian-kernel density score among its
// peers; ties go to the lowest index. Used by data_mode chain initialization.
std::size_t kernel_density_argmax(const Dataset& points, double bandwidth);

// Draws the exploration batch for fhat under plan.sampler (method dispatch,
// seeds derived from plan.seed).
SampleBatch draw_exploration_batch(const Objective& fhat, const InitPlan& plan);

// Strategy cores operating on an already-drawn batch; used by the wrappers
// below and directly by tests that need identical batches across strategies.
CandidateSet sips_select(const Objective& fhat, const SampleBatch& batch);
CandidateSet annealing_select(const Objective& fhat, const SampleBatch& batch);
CandidateSet sao_select(const Objective& fhat, const SampleBatch& batch, const GDConfig& inner);

// Full strategies against a prebuilt empirical loss; the harness entry point.
CandidateSet run_strategy(const Objective& fhat, const InitPlan& plan);

// Strategy entry points that build fhat = empirical_loss(outsourced, loss).
CandidateSet sips(const Dataset& outsourced, const InitPlan& plan, const PointwiseLoss& loss,
                  const Domain& domain);
CandidateSet oips_annealing(const Dataset& outsourced, const InitPlan& plan,
                            const PointwiseLoss& loss, const Domain& domain);
CandidateSet oips_sao(const Dataset& outsourced, const InitPlan& plan, const PointwiseLoss& loss,
                      const Domain& domain);

// SampleBatch CSV schema plus `score` and `selected` columns.
void write_candidate_set(const CandidateSet& set, const std::string& csv_path);

}  // namespace gibbsinit
