#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <string>
#include <vector>

#include "gibbsinit/initpoint.hpp"
#include "gibbsinit/io.hpp"
#include "gibbsinit/problems.hpp"
#include "gibbsinit/rng.hpp"
#include "gibbsinit/samplers.hpp"
#include "support/checks.hpp"
#include "support/tempdir.hpp"

using namespace gibbsinit;

namespace {

Objective quadratic_nd(int dim, double half_width) {
  Objective f;
  f.dim = dim;
  f.domain = Domain::cube(dim, -half_width, half_width);
  f.value_fn = [dim](const double* t) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += t[i] * t[i];
    return s;
  };
  f.gradient_fn = [dim](const double* t, double* g) {
    for (int i = 0; i < dim; ++i) g[i] = 2.0 * t[i];
  };
  f.per_coordinate.resize(dim);
  for (int i = 0; i < dim; ++i) f.per_coordinate[i] = [](double t) { return t * t; };
  return f;
}

Dataset make_dataset_1d(const std::vector<double>& values) {
  Dataset data;
  data.dim = 1;
  data.values = values;
  return data;
}

SampleBatch batch_1d(const std::vector<double>& points) {
  SampleBatch b;
  b.dim = 1;
  b.L = points.size();
  b.points = points;
  return b;
}

std::vector<std::string> split_lines_local(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double norm2(const double* p, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i) s += p[i] * p[i];
  return std::sqrt(s);
}

// Middle stationary point of the gap-1 double well; basin boundary for descent.
constexpr double kWellRidge = -0.1875;

}  // namespace

TEST_CASE("random baseline draws uniform points and reports no selection") {
  Domain box = Domain::cube(5, -5.0, 5.0);
  CandidateSet set = random_start(box, 10000, 77);

  CHECK(set.dim == 5);
  CHECK(set.size() == 10000);
  CHECK(set.strategy == "random");
  CHECK(set.selected_index == -1);
  CHECK(set.scores.empty());
  CHECK(set.excluded == 0);

  for (int c = 0; c < 5; ++c) {
    double mean = 0.0;
    for (std::size_t k = 0; k < set.size(); ++k) mean += set.point(k)[c];
    mean /= (double)set.size();
    CHECK(std::abs(mean) <= 0.1);
  }
  for (std::size_t k = 0; k < set.size(); ++k) CHECK(box.contains(set.point(k), 5));
}

TEST_CASE("random baseline ball fraction matches the volume ratio") {
  // In the unit disc, P(|theta| <= 1/2) = (1/2)^2 = 1/4.
  Domain disc = Domain::ball({0.0, 0.0}, 1.0);
  CandidateSet set = random_start(disc, 10000, 3);
  std::size_t inside = 0;
  for (std::size_t k = 0; k < set.size(); ++k)
    if (norm2(set.point(k), 2) <= 0.5) ++inside;
  double frac = (double)inside / (double)set.size();
  CHECK(std::abs(frac - 0.25) <= 0.02);
}

TEST_CASE("random baseline is seed-reproducible and rejects m = 0") {
  Domain box = Domain::cube(3, -1.0, 1.0);
  CandidateSet a = random_start(box, 1, 42);
  CandidateSet b = random_start(box, 1, 42);
  REQUIRE(a.points.size() == 3);
  CHECK(std::memcmp(a.points.data(), b.points.data(), 3 * sizeof(double)) == 0);

  CandidateSet c = random_start(box, 1, 43);
  CHECK(c.points != a.points);

  CHECK(check::error_code_of([&] { random_start(box, 0, 1); }) == "bad-subsample-size");
}

TEST_CASE("kernel density argmax picks the centre of the densest cluster") {
  Dataset data = make_dataset_1d({2.0, 2.01, 1.99, 2.02, 1.98, -2.0, -2.05});
  // 2.0 sits symmetrically inside the five-point cluster, so its kernel score
  // dominates every neighbour's.
  CHECK(kernel_density_argmax(data, 0.3) == 0);

  Dataset dup = make_dataset_1d({1.0, 1.0, 3.0});
  CHECK(kernel_density_argmax(dup, 0.5) == 0);  // identical scores: lowest index

  Dataset empty;
  empty.dim = 1;
  CHECK(check::error_code_of([&] { kernel_density_argmax(empty, 0.3); }) == "empty-dataset");
}

TEST_CASE("exploration batch dispatches on the sampler method") {
  Objective fhat = quadratic_nd(2, 5.0);

  InitPlan plan;
  plan.strategy = "sips";
  plan.beta = 2.0;
  plan.L = 32;
  plan.seed = 909;

  SUBCASE("uniform method matches a direct uniform draw") {
    plan.sampler.method = "uniform";
    SampleBatch got = draw_exploration_batch(fhat, plan);
    SampleBatch want = uniform_sample(fhat.domain, 32, derive_seed(909, 0));
    REQUIRE(got.points.size() == want.points.size());
    CHECK(std::memcmp(got.points.data(), want.points.data(),
                      got.points.size() * sizeof(double)) == 0);
  }

  SUBCASE("chain methods start from the resolved point when present") {
    plan.sampler.method = "ula";
    plan.sampler.step = 0.01;
    plan.sampler.burnin = 5;
    plan.sampler.thinning = 2;
    plan.chain_init_point = {3.0, -1.0};

    SampleBatch got = draw_exploration_batch(fhat, plan);

    GibbsTarget target{&fhat, plan.beta};
    ChainParams params;
    params.step = 0.01;
    SampleBatch want =
        run_chain(ChainMethod::ula, target, 32, 5, 2, {3.0, -1.0}, params, derive_seed(909, 0));
    REQUIRE(got.points.size() == want.points.size());
    CHECK(std::memcmp(got.points.data(), want.points.data(),
                      got.points.size() * sizeof(double)) == 0);
  }

  SUBCASE("chain methods fall back to a seeded uniform start") {
    plan.sampler.method = "ula";
    plan.sampler.step = 0.01;
    plan.sampler.burnin = 5;
    plan.sampler.thinning = 2;
    REQUIRE(plan.chain_init_point.empty());

    SampleBatch got = draw_exploration_batch(fhat, plan);

    Rng init_rng(derive_seed(909, 1));
    std::vector<double> init = fhat.domain.sample_uniform(init_rng);
    GibbsTarget target{&fhat, plan.beta};
    ChainParams params;
    params.step = 0.01;
    SampleBatch want =
        run_chain(ChainMethod::ula, target, 32, 5, 2, init, params, derive_seed(909, 0));
    CHECK(std::memcmp(got.points.data(), want.points.data(),
                      got.points.size() * sizeof(double)) == 0);
  }

  SUBCASE("exact per-coordinate sampling requires separable structure") {
    Objective coupled = quadratic_nd(2, 5.0);
    coupled.per_coordinate.clear();
    plan.sampler.method = "rejection";
    CHECK(check::error_code_of([&] { draw_exploration_batch(coupled, plan); }) ==
          "envelope-too-loose");
  }

  SUBCASE("unknown method is rejected") {
    plan.sampler.method = "metropolis-within-gibbs";
    CHECK(check::error_code_of([&] { draw_exploration_batch(fhat, plan); }) == "bad-sampler");
  }
}

TEST_CASE("keep-all selection preserves every sample with its score") {
  Objective fhat = quadratic_nd(2, 5.0);
  SampleBatch batch = uniform_sample(fhat.domain, 16, 5);

  CandidateSet set = sips_select(fhat, batch);
  CHECK(set.strategy == "sips");
  CHECK(set.selected_index == -1);
  REQUIRE(set.size() == 16);
  CHECK(std::memcmp(set.points.data(), batch.points.data(), batch.points.size() * sizeof(double)) ==
        0);
  REQUIRE(set.scores.size() == 16);
  for (std::size_t k = 0; k < 16; ++k)
    CHECK(set.scores[k] == fhat.value_at(set.point(k)));
}

TEST_CASE("keep-all selection at zero inverse temperature is uniform") {
  Objective fhat = st_objective(1);

  InitPlan plan;
  plan.strategy = "sips";
  plan.beta = 0.0;
  plan.L = 20000;
  plan.sampler.method = "rejection";
  plan.seed = 12;

  CandidateSet set = run_strategy(fhat, plan);
  REQUIRE(set.size() == 20000);

  std::vector<double> t(set.points);
  double mean = 0.0;
  for (double v : t) {
    CHECK(v >= -5.0);
    CHECK(v <= 5.0);
    mean += v;
  }
  mean /= (double)t.size();
  CHECK(std::abs(mean) <= 0.1);

  // Kolmogorov-Smirnov distance against the uniform CDF on [-5,5].
  std::sort(t.begin(), t.end());
  double ks = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    double cdf = (t[k] + 5.0) / 10.0;
    double lo = (double)k / (double)t.size();
    double hi = (double)(k + 1) / (double)t.size();
    ks = std::max(ks, std::max(std::abs(cdf - lo), std::abs(cdf - hi)));
  }
  CHECK(ks <= 0.02);
}

TEST_CASE("keep-all candidates on clustered data score below uniform points") {
  GMMSpec spec = gmm_default_instance();
  Dataset data = gmm_sample(spec, 50, 2024);
  PointwiseLoss loss = gmm_pointwise_loss(spec);
  Domain domain = gmm_default_domain(spec);

  InitPlan plan;
  plan.strategy = "sips";
  plan.beta = 10.0;
  plan.L = 1000;
  plan.sampler.method = "ula";
  plan.sampler.step = 1e-6;
  plan.sampler.burnin = 1000;
  plan.sampler.thinning = 10;
  plan.sampler.chain_init = "data_mode";
  plan.sampler.chain_init_bandwidth = 0.3;
  plan.seed = 7;

  CandidateSet set = sips(data, plan, loss, domain);
  REQUIRE(set.size() == 1000);
  REQUIRE(set.scores.size() == 1000);
  double mean_candidate = 0.0;
  for (double s : set.scores) mean_candidate += s;
  mean_candidate /= 1000.0;

  Objective fhat = empirical_loss(data, loss, domain);
  SampleBatch uniform = uniform_sample(domain, 1000, 4096);
  double mean_uniform = 0.0;
  for (std::size_t k = 0; k < uniform.size(); ++k)
    mean_uniform += fhat.value_at(uniform.point(k));
  mean_uniform /= 1000.0;

  CHECK(mean_candidate < mean_uniform);
}

TEST_CASE("argmin selection returns the lowest-scoring sample") {
  Objective fhat = quadratic_nd(1, 5.0);

  CandidateSet set = annealing_select(fhat, batch_1d({0.0, 1.0}));
  CHECK(set.strategy == "oips_annealing");
  REQUIRE(set.size() == 1);
  CHECK(set.points[0] == 0.0);
  CHECK(set.scores[0] == 0.0);
  CHECK(set.selected_index == 0);

  // Equal scores keep the earliest sample.
  CandidateSet tie = annealing_select(fhat, batch_1d({2.0, -2.0, 2.0}));
  CHECK(tie.points[0] == 2.0);

  // A single sample is returned no matter how it scores.
  CandidateSet solo = annealing_select(fhat, batch_1d({3.7}));
  CHECK(solo.points[0] == 3.7);
  CHECK(solo.scores[0] == fhat.value_at(solo.points.data()));
}

TEST_CASE("argmin selection lands in the deeper well almost always") {
  Objective well = double_well_1d(1.0);

  InitPlan plan;
  plan.strategy = "oips_annealing";
  plan.beta = 10.0;
  plan.L = 100;
  plan.sampler.method = "rejection";

  int deep = 0;
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    plan.seed = trial;
    CandidateSet set = run_strategy(well, plan);
    REQUIRE(set.size() == 1);
    if (set.points[0] > kWellRidge) ++deep;
  }
  CHECK(deep >= 95);
}

TEST_CASE("strategy dispatch validates its plan") {
  Objective fhat = quadratic_nd(1, 5.0);
  InitPlan plan;
  plan.strategy = "simulated-annealing";
  plan.L = 4;
  plan.sampler.method = "uniform";
  CHECK(check::error_code_of([&] { run_strategy(fhat, plan); }) == "bad-strategy");

  plan.strategy = "sips";
  plan.L = 0;
  CHECK(check::error_code_of([&] { run_strategy(fhat, plan); }) == "bad-subsample-size");

  plan.strategy = "random";
  plan.multistart_m = 3;
  plan.seed = 9;
  CandidateSet set = run_strategy(fhat, plan);
  CHECK(set.strategy == "random");
  CHECK(set.size() == 3);
}

TEST_CASE("inner descent drives a convex objective to its minimiser") {
  Objective fhat = quadratic_nd(2, 5.0);

  InitPlan plan;
  plan.strategy = "oips_sao";
  plan.beta = 1.0;
  plan.L = 8;
  plan.sampler.method = "uniform";
  plan.inner_optimizer = GDConfig{0.05, 200, false};
  plan.seed = 31;

  CandidateSet set = run_strategy(fhat, plan);
  CHECK(set.strategy == "oips_sao");
  REQUIRE(set.size() == 1);
  CHECK(set.selected_index == 0);
  CHECK(set.excluded == 0);
  CHECK(std::abs(set.points[0]) <= 1e-3);
  CHECK(std::abs(set.points[1]) <= 1e-3);
  CHECK(set.scores[0] == doctest::Approx(fhat.value_at(set.points.data())).epsilon(1e-12));
}

TEST_CASE("inner descent refines samples into their local minima") {
  Objective well = double_well_1d(1.0);
  GDConfig inner{0.05, 200, false};

  // -1.8 descends into the shallow well; 0.3 and 2.2 reach the deep one.
  CandidateSet set = sao_select(well, batch_1d({-1.8, 0.3, 2.2}), inner);
  REQUIRE(set.size() == 1);
  CHECK(set.excluded == 0);
  CHECK(std::abs(set.points[0] - 1.0) <= 1e-3);
  CHECK(set.scores[0] == doctest::Approx(-0.5).epsilon(1e-6));
}

TEST_CASE("inner descent on one sample equals a plain descent run") {
  Objective well = double_well_1d(1.0);
  GDConfig inner{0.05, 200, false};

  CandidateSet set = sao_select(well, batch_1d({0.3}), inner);
  Trajectory t = gd_run(well, {0.3}, inner);
  REQUIRE(set.size() == 1);
  CHECK(set.points[0] == t.final[0]);
  CHECK(set.scores[0] == t.final_value);
}

TEST_CASE("diverging refinements are excluded, not selected") {
  Objective half;
  half.dim = 1;
  half.domain = Domain::cube(1, -5.0, 5.0);
  half.value_fn = [](const double* t) { return t[0] * t[0]; };
  half.gradient_fn = [](const double* t, double* g) {
    g[0] = t[0] < 0.0 ? 2.0 * t[0] : std::numeric_limits<double>::quiet_NaN();
  };
  GDConfig inner{0.05, 200, false};

  CandidateSet set = sao_select(half, batch_1d({-1.0, 0.5, 0.8}), inner);
  CHECK(set.excluded == 2);
  REQUIRE(set.size() == 1);
  CHECK(std::abs(set.points[0]) <= 1e-6);  // 0.9^200 of the surviving start

  Objective broken = half;
  broken.gradient_fn = [](const double*, double* g) {
    g[0] = std::numeric_limits<double>::quiet_NaN();
  };
  CHECK(check::error_code_of([&] { sao_select(broken, batch_1d({-1.0, 0.5, 0.8}), inner); }) ==
        "all-candidates-diverged");
}

TEST_CASE("refinement never scores worse than the raw argmin") {
  Objective well = double_well_1d(1.0);
  // Step below the inverse curvature bound, so each descent is monotone.
  GDConfig inner{0.01, 300, false};

  InitPlan plan;
  plan.strategy = "oips_annealing";
  plan.beta = 5.0;
  plan.L = 50;
  plan.sampler.method = "rejection";

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    plan.seed = seed;
    SampleBatch batch = draw_exploration_batch(well, plan);
    CandidateSet raw = annealing_select(well, batch);
    CandidateSet refined = sao_select(well, batch, inner);
    CHECK(refined.scores[0] <= raw.scores[0] + 1e-9);
  }
}

TEST_CASE("scaling the objective and inverse temperature together changes nothing") {
  Objective well = double_well_1d(1.0);

  Objective scaled = well;
  scaled.value_fn = [base = well.value_fn](const double* t) { return 4.0 * base(t); };
  scaled.gradient_fn = [base = well.gradient_fn, dim = well.dim](const double* t, double* g) {
    base(t, g);
    for (int i = 0; i < dim; ++i) g[i] *= 4.0;
  };
  scaled.per_coordinate.clear();
  for (const auto& term : well.per_coordinate)
    scaled.per_coordinate.push_back([term](double t) { return 4.0 * term(t); });

  InitPlan plan;
  plan.strategy = "oips_annealing";
  plan.beta = 10.0;
  plan.L = 64;
  plan.sampler.method = "rejection";
  plan.seed = 5;

  InitPlan quarter = plan;
  quarter.beta = 2.5;  // beta/4 against 4*F: the Gibbs weights are unchanged

  CandidateSet base_set = run_strategy(well, plan);
  CandidateSet scaled_set = run_strategy(scaled, quarter);
  REQUIRE(base_set.size() == 1);
  REQUIRE(scaled_set.size() == 1);
  CHECK(scaled_set.points[0] == base_set.points[0]);
  CHECK(scaled_set.scores[0] == 4.0 * base_set.scores[0]);

  InitPlan sips_plan = plan;
  sips_plan.strategy = "sips";
  InitPlan sips_quarter = quarter;
  sips_quarter.strategy = "sips";
  CandidateSet keep_base = run_strategy(well, sips_plan);
  CandidateSet keep_scaled = run_strategy(scaled, sips_quarter);
  CHECK(keep_base.points == keep_scaled.points);
}

TEST_CASE("wrapper strategies enforce the plan strategy and resolve data-mode starts") {
  Dataset data = make_dataset_1d({2.0, 2.01, 1.99, -2.0});
  PointwiseLoss loss;
  loss.value = [](const double* t, const double* x) {
    double d = t[0] - x[0];
    return d * d;
  };
  loss.gradient = [](const double* t, const double* x, double* g) { g[0] = 2.0 * (t[0] - x[0]); };
  Domain box = Domain::cube(1, -5.0, 5.0);

  InitPlan plan;
  plan.strategy = "sips";
  plan.beta = 1.0;
  plan.L = 10;
  plan.sampler.method = "ula";
  plan.sampler.step = 0.01;
  plan.sampler.burnin = 3;
  plan.sampler.thinning = 1;
  plan.sampler.chain_init = "data_mode";
  plan.sampler.chain_init_bandwidth = 0.3;
  plan.seed = 21;

  SUBCASE("mismatched strategy is rejected") {
    CHECK(check::error_code_of([&] { oips_sao(data, plan, loss, box); }) == "bad-strategy");
  }

  SUBCASE("data-mode start equals a chain from the density argmax") {
    CandidateSet set = sips(data, plan, loss, box);

    Objective fhat = empirical_loss(data, loss, box);
    InitPlan manual = plan;
    manual.chain_init_point = {2.0};  // kernel_density_argmax row, already inside the box
    SampleBatch want = draw_exploration_batch(fhat, manual);
    REQUIRE(set.points.size() == want.points.size());
    CHECK(std::memcmp(set.points.data(), want.points.data(),
                      want.points.size() * sizeof(double)) == 0);
  }

  SUBCASE("an explicit start point wins over data-mode resolution") {
    InitPlan preset = plan;
    preset.chain_init_point = {-3.0};
    CandidateSet set = sips(data, preset, loss, box);

    Objective fhat = empirical_loss(data, loss, box);
    SampleBatch want = draw_exploration_batch(fhat, preset);
    CHECK(std::memcmp(set.points.data(), want.points.data(),
                      want.points.size() * sizeof(double)) == 0);
  }
}

TEST_CASE("candidate sets export coordinates, scores, and selection flags") {
  check::TempDir tmp("initpoint_csv");

  Objective fhat = quadratic_nd(2, 5.0);
  SampleBatch batch = uniform_sample(fhat.domain, 4, 17);
  CandidateSet keep = sips_select(fhat, batch);
  std::string keep_path = tmp.file("keep.csv");
  write_candidate_set(keep, keep_path);

  std::string text = read_text_file(keep_path);
  std::vector<std::string> lines = split_lines_local(text);
  REQUIRE(lines.size() >= 6);  // header + 4 rows + trailing empty piece
  CHECK(lines[0] == "coord_0,coord_1,score,selected");
  for (std::size_t k = 0; k < 4; ++k) {
    std::vector<std::string> fields = split_csv_row(lines[k + 1]);
    REQUIRE(fields.size() == 4);
    CHECK(std::stod(fields[0]) == keep.point(k)[0]);
    CHECK(std::stod(fields[1]) == keep.point(k)[1]);
    CHECK(std::stod(fields[2]) == keep.scores[k]);
    CHECK(fields[3] == "1");  // every kept sample is part of the returned set
  }

  CandidateSet picked = annealing_select(fhat, batch);
  std::string picked_path = tmp.file("picked.csv");
  write_candidate_set(picked, picked_path);
  std::vector<std::string> picked_lines = split_lines_local(read_text_file(picked_path));
  REQUIRE(picked_lines.size() >= 2);
  CHECK(picked_lines[0] == "coord_0,coord_1,score,selected");
  std::vector<std::string> row = split_csv_row(picked_lines[1]);
  REQUIRE(row.size() == 4);
  CHECK(std::stod(row[0]) == picked.points[0]);
  CHECK(std::stod(row[2]) == picked.scores[0]);
  CHECK(row[3] == "1");

  // The random baseline has no scores; the column stays empty.
  CandidateSet plain = random_start(fhat.domain, 2, 23);
  std::string plain_path = tmp.file("plain.csv");
  write_candidate_set(plain, plain_path);
  std::vector<std::string> plain_lines = split_lines_local(read_text_file(plain_path));
  std::vector<std::string> plain_row = split_csv_row(plain_lines[1]);
  REQUIRE(plain_row.size() == 4);
  CHECK(plain_row[2] == "");
  CHECK(plain_row[3] == "1");
}
