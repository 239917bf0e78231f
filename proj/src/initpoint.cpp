#include "gibbsinit/initpoint.hpp"

#include <cmath>
#include <limits>

#include "gibbsinit/error.hpp"
#include "gibbsinit/fastmath.hpp"
#include "gibbsinit/io.hpp"
#include "gibbsinit/parallel.hpp"

namespace gibbsinit {

CandidateSet random_start(const Domain& domain, std::uint64_t m, std::uint64_t seed) {
  if (m < 1) throw Error("bad-subsample-size", "random_start needs m >= 1");
  SampleBatch batch = uniform_sample(domain, m, seed);
  CandidateSet set;
  set.dim = domain.dim;
  set.points = std::move(batch.points);
  set.strategy = "random";
  return set;
}

std::size_t kernel_density_argmax(const Dataset& points, double bandwidth) {
  if (points.size() == 0) throw Error("empty-dataset", "density argmax needs points");
  const std::size_t n = points.size();
  const int d = points.dim;
  const double inv2b2 = 1.0 / (2.0 * bandwidth * bandwidth);
  std::vector<double> score(n);
  parallel_for(n, [&](std::size_t j) {
    const double* xj = points.row(j);
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double* xk = points.row(k);
      double r2 = 0.0;
      for (int i = 0; i < d; ++i) {
        double diff = xj[i] - xk[i];
        r2 += diff * diff;
      }
      s += fast_exp(-r2 * inv2b2);
    }
    score[j] = s;
  });
  std::size_t best = 0;
  for (std::size_t j = 1; j < n; ++j)
    if (score[j] > score[best]) best = j;
  return best;
}

SampleBatch draw_exploration_batch(const Objective& fhat, const InitPlan& plan) {
  const SamplerSpec& s = plan.sampler;
  const std::uint64_t sampler_seed = derive_seed(plan.seed, 0);
  GibbsTarget target{&fhat, plan.beta};

  if (s.method == "uniform") return uniform_sample(fhat.domain, plan.L, sampler_seed);
  if (s.method == "snis") return snis_resample(target, s.proposal_count, plan.L, sampler_seed);
  if (s.method == "rejection") {
    if (!fhat.separable())
      throw Error("envelope-too-loose",
                  "rejection sampling requires a separable objective; use ula/rwm/snis");
    return rejection_sample_separable(fhat.per_coordinate, plan.beta, fhat.domain, plan.L,
                                      sampler_seed);
  }
  if (s.method == "ula" || s.method == "rwm") {
    std::vector<double> init = plan.chain_init_point;
    if (init.empty()) {
      Rng init_rng(derive_seed(plan.seed, 1));
      init = fhat.domain.sample_uniform(init_rng);
    }
    ChainParams params;
    params.step = s.step;
    params.scale = s.scale;
    return run_chain(s.method == "ula" ? ChainMethod::ula : ChainMethod::rwm, target, plan.L,
                     s.burnin, s.thinning, init, params, sampler_seed);
  }
  throw Error("bad-sampler", "unknown sampler method '" + s.method + "'");
}

CandidateSet sips_select(const Objective& fhat, const SampleBatch& batch) {
  CandidateSet set;
  set.dim = batch.dim;
  set.points = batch.points;
  set.strategy = "sips";
  set.scores.resize(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) set.scores[i] = fhat.value_at(batch.point(i));
  return set;
}

CandidateSet annealing_select(const Objective& fhat, const SampleBatch& batch) {
  const std::size_t L = batch.size();
  std::vector<double> scores(L);
  for (std::size_t i = 0; i < L; ++i) scores[i] = fhat.value_at(batch.point(i));
  std::size_t best = 0;
  for (std::size_t i = 1; i < L; ++i)
    if (scores[i] < scores[best]) best = i;  // strict: ties keep the lowest index

  CandidateSet set;
  set.dim = batch.dim;
  set.points.assign(batch.point(best), batch.point(best) + batch.dim);
  set.scores.assign(1, scores[best]);
  set.selected_index = 0;
  set.strategy = "oips_annealing";
  return set;
}

CandidateSet sao_select(const Objective& fhat, const SampleBatch& batch, const GDConfig& inner) {
  const std::size_t L = batch.size();
  const int d = batch.dim;
  std::vector<double> refined(L * (std::size_t)d);
  std::vector<double> scores(L);
  std::vector<char> ok(L, 0);

  parallel_for(L, [&](std::size_t i) {
    std::vector<double> start(batch.point(i), batch.point(i) + d);
    Trajectory t = gd_run(fhat, start, inner);
    if (t.diverged) {
      scores[i] = std::numeric_limits<double>::infinity();
      return;
    }
    std::copy(t.final.begin(), t.final.end(), refined.begin() + i * (std::size_t)d);
    scores[i] = t.final_value;
    ok[i] = 1;
  });

  std::size_t best = L;
  std::uint64_t excluded = 0;
  for (std::size_t i = 0; i < L; ++i) {
    if (!ok[i]) {
      ++excluded;
      continue;
    }
    if (best == L || scores[i] < scores[best]) best = i;
  }
  if (best == L)
    throw Error("all-candidates-diverged", "inner optimizer diverged from every sample");

  CandidateSet set;
  set.dim = d;
  set.points.assign(refined.begin() + best * (std::size_t)d,
                    refined.begin() + (best + 1) * (std::size_t)d);
  set.scores.assign(1, scores[best]);
  set.selected_index = 0;
  set.strategy = "oips_sao";
  set.excluded = excluded;
  return set;
}

CandidateSet run_strategy(const Objective& fhat, const InitPlan& plan) {
  if (plan.strategy == "random")
    return random_start(fhat.domain, plan.multistart_m, derive_seed(plan.seed, 0));
  if (plan.L < 1) throw Error("bad-subsample-size", "exploration needs L >= 1");
  SampleBatch batch = draw_exploration_batch(fhat, plan);
  if (plan.strategy == "sips") return sips_select(fhat, batch);
  if (plan.strategy == "oips_annealing") return annealing_select(fhat, batch);
  if (plan.strategy == "oips_sao") return sao_select(fhat, batch, plan.inner_optimizer);
  throw Error("bad-strategy", "unknown strategy '" + plan.strategy + "'");
}

namespace {

CandidateSet with_empirical_loss(const Dataset& outsourced, const InitPlan& plan,
                                 const PointwiseLoss& loss, const Domain& domain,
                                 const std::string& expected_strategy) {
  if (plan.strategy != expected_strategy)
    throw Error("bad-strategy",
                "plan.strategy is '" + plan.strategy + "', expected '" + expected_strategy + "'");
  Objective fhat = empirical_loss(outsourced, loss, domain);
  InitPlan resolved = plan;
  if (resolved.chain_init_point.empty() && resolved.sampler.chain_init == "data_mode") {
    std::size_t idx = kernel_density_argmax(outsourced, resolved.sampler.chain_init_bandwidth);
    std::vector<double> p(outsourced.row(idx), outsourced.row(idx) + outsourced.dim);
    resolved.chain_init_point = domain.project(std::move(p));
  }
  return run_strategy(fhat, resolved);
}

}  // namespace

CandidateSet sips(const Dataset& outsourced, const InitPlan& plan, const PointwiseLoss& loss,
                  const Domain& domain) {
  return with_empirical_loss(outsourced, plan, loss, domain, "sips");
}

CandidateSet oips_annealing(const Dataset& outsourced, const InitPlan& plan,
                            const PointwiseLoss& loss, const Domain& domain) {
  return with_empirical_loss(outsourced, plan, loss, domain, "oips_annealing");
}

CandidateSet oips_sao(const Dataset& outsourced, const InitPlan& plan, const PointwiseLoss& loss,
                      const Domain& domain) {
  return with_empirical_loss(outsourced, plan, loss, domain, "oips_sao");
}

void write_candidate_set(const CandidateSet& set, const std::string& csv_path) {
  std::string out;
  for (int i = 0; i < set.dim; ++i) out += "coord_" + std::to_string(i) + ",";
  out += "score,selected\n";
  const bool has_scores = set.scores.size() == set.size();
  for (std::size_t k = 0; k < set.size(); ++k) {
    const double* p = set.point(k);
    for (int i = 0; i < set.dim; ++i) {
      out += format_double(p[i]);
      out += ',';
    }
    out += has_scores ? format_double(set.scores[k]) : "";
    out += ',';
    bool selected = set.selected_index < 0 || (std::size_t)set.selected_index == k;
    out += selected ? "1" : "0";
    out += '\n';
  }
  write_text_file(csv_path, out);
}

}  // namespace gibbsinit
