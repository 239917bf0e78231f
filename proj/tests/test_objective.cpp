#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "gibbsinit/error.hpp"
#include "gibbsinit/objective.hpp"
#include "gibbsinit/problems.hpp"
#include "gibbsinit/rng.hpp"
#include "support/checks.hpp"
#include "support/oracles.hpp"
#include "support/stats.hpp"

using namespace gibbsinit;

namespace {

Dataset make_dataset(int dim, std::initializer_list<double> flat) {
  Dataset d;
  d.dim = dim;
  d.values.assign(flat);
  return d;
}

PointwiseLoss squared_distance_loss(int dim) {
  PointwiseLoss loss;
  loss.value = [dim](const double* t, const double* x) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += (t[i] - x[i]) * (t[i] - x[i]);
    return s;
  };
  loss.gradient = [dim](const double* t, const double* x, double* g) {
    for (int i = 0; i < dim; ++i) g[i] = 2.0 * (t[i] - x[i]);
  };
  return loss;
}

}  // namespace

TEST_CASE("empirical loss over one point reproduces the pointwise loss exactly") {
  const auto data = make_dataset(2, {0.5, -0.25});
  const auto dom = Domain::cube(2, -5.0, 5.0);
  const auto loss = squared_distance_loss(2);
  const auto obj = empirical_loss(data, loss, dom);
  CHECK(obj.dim == 2);
  CHECK(obj.deterministic);
  CHECK(obj.has_analytic_gradient());
  const double x[2] = {0.5, -0.25};
  Rng rng(3);
  for (int k = 0; k < 20; ++k) {
    const std::vector<double> t = {rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)};
    CHECK(obj.value(t) == loss.value(t.data(), x));
    const auto g = obj.gradient(t);
    double gx[2];
    loss.gradient(t.data(), x, gx);
    CHECK(g[0] == gx[0]);
    CHECK(g[1] == gx[1]);
  }
}

TEST_CASE("symmetric two-point mean: squared distance to {0,2} at 1 is 1") {
  const auto data = make_dataset(1, {0.0, 2.0});
  const auto obj =
      empirical_loss(data, squared_distance_loss(1), Domain::cube(1, -5.0, 5.0));
  CHECK(obj.value({1.0}) == 1.0);
  CHECK(obj.gradient({1.0})[0] == 0.0);
}

TEST_CASE("empty dataset is rejected") {
  Dataset empty;
  empty.dim = 1;
  CHECK(check::error_code_of([&] {
          empirical_loss(empty, squared_distance_loss(1), Domain::cube(1, -1.0, 1.0));
        }) == "empty-dataset");
}

TEST_CASE("mean linearity: concatenating equal halves averages their losses") {
  Rng rng(11);
  Dataset a, b, both;
  a.dim = b.dim = both.dim = 2;
  for (int i = 0; i < 16; ++i) {
    const double row[2] = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
    (i < 8 ? a : b).push_row(row);
    both.push_row(row);
  }
  const auto dom = Domain::cube(2, -5.0, 5.0);
  PointwiseLoss pl;
  pl.value = [](const double* t, const double* x) {
    double s = 0.0;
    for (int i = 0; i < 2; ++i) s += std::cos(t[i] - x[i]) + 0.1 * t[i] * t[i];
    return s;
  };
  const auto fa = empirical_loss(a, pl, dom);
  const auto fb = empirical_loss(b, pl, dom);
  const auto fboth = empirical_loss(both, pl, dom);
  Rng trng(12);
  for (int k = 0; k < 50; ++k) {
    const std::vector<double> t = {trng.uniform(-5.0, 5.0), trng.uniform(-5.0, 5.0)};
    const double avg = 0.5 * (fa.value(t) + fb.value(t));
    const double whole = fboth.value(t);
    CHECK(std::fabs(whole - avg) <= 1e-12 * (1.0 + std::fabs(whole)));
  }
}

TEST_CASE("empirical mixture loss approaches its population limit at rate n^{-1/2}") {
  // 1-D mixture instance; sup-gap between the empirical mean loss on n seeded
  // samples and the closed-form population loss, measured on a fixed grid.
  const auto spec = gmm_instance(1, 3, 0.5, 3.0, 1.0, {1.0 / 3, 1.0 / 3, 1.0 / 3}, 7);
  const auto dom = gmm_default_domain(spec);
  const auto pop = gmm_population_objective(spec, dom);
  const auto loss = gmm_pointwise_loss(spec);
  const std::vector<std::size_t> sizes = {10, 100, 1000, 10000};
  const int seeds = 8;
  std::vector<double> log_n, log_gap;
  for (std::size_t n : sizes) {
    std::vector<double> gaps;
    for (int s = 0; s < seeds; ++s) {
      const auto data = gmm_sample(spec, n, 1000 + s);
      const auto emp = empirical_loss(data, loss, dom);
      double sup = 0.0;
      for (int g = 0; g <= 400; ++g) {
        const double t = -3.4 + 6.8 * g / 400.0;
        sup = std::max(sup, std::fabs(emp.value({t}) - pop.value({t})));
      }
      gaps.push_back(sup);
    }
    log_n.push_back(std::log(double(n)));
    log_gap.push_back(std::log(stat::median(gaps)));
  }
  const double slope = oracle::ols_slope(log_n, log_gap);
  CHECK(slope > -0.75);
  CHECK(slope < -0.3);
}

TEST_CASE("subsample determinism and multiset identity") {
  Rng rng(5);
  Dataset data;
  data.dim = 3;
  for (int i = 0; i < 12; ++i) {
    double row[3] = {rng.uniform(), rng.uniform(), rng.uniform()};
    data.push_row(row);
  }
  SUBCASE("full-size subsample is the same multiset") {
    const auto all = subsample(data, 12, 99);
    REQUIRE(all.size() == 12);
    auto key = [](const double* r) { return std::vector<double>(r, r + 3); };
    std::multiset<std::vector<double>> in, out;
    for (std::size_t i = 0; i < 12; ++i) {
      in.insert(key(data.row(i)));
      out.insert(key(all.row(i)));
    }
    CHECK(in == out);
  }
  SUBCASE("same seed, same subset; some other seed differs") {
    const auto s1 = subsample(data, 4, 123);
    const auto s2 = subsample(data, 4, 123);
    CHECK(s1.values == s2.values);
    bool any_diff = false;
    for (std::uint64_t seed = 0; seed < 20 && !any_diff; ++seed)
      any_diff = subsample(data, 4, seed).values != s1.values;
    CHECK(any_diff);
  }
  SUBCASE("out-of-range sizes are rejected") {
    CHECK(check::error_code_of([&] { subsample(data, 0, 1); }) == "bad-subsample-size");
    CHECK(check::error_code_of([&] { subsample(data, 13, 1); }) ==
          "bad-subsample-size");
  }
}

TEST_CASE("single-row subsample is uniform over the source rows") {
  Dataset data = make_dataset(1, {10.0, 20.0, 30.0, 40.0});
  std::map<double, int> counts;
  const int draws = 10000;
  for (int s = 0; s < draws; ++s) counts[subsample(data, 1, s).values[0]]++;
  REQUIRE(counts.size() == 4);
  for (const auto& [value, count] : counts) {
    (void)value;
    CHECK(std::fabs(double(count) / draws - 0.25) <= 0.02);
  }
}

TEST_CASE("projection fixes interior points and maps outside points to the boundary") {
  const auto ball = Domain::ball({0.0, 0.0}, 1.0);
  CHECK(ball.project({0.3, 0.4}) == std::vector<double>{0.3, 0.4});
  const auto scaled = ball.project({3.0, 4.0});
  CHECK(scaled[0] == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(scaled[1] == doctest::Approx(0.8).epsilon(1e-12));
  const auto box = Domain::cube(2, -5.0, 5.0);
  CHECK(box.project({7.0, -9.0}) == std::vector<double>{5.0, -5.0});
}

TEST_CASE("projection is idempotent on random points for both domain kinds") {
  const auto ball = Domain::ball({0.5, -0.5, 0.0}, 2.0);
  const auto box = Domain::cube(3, -1.0, 4.0);
  Rng rng(21);
  for (int k = 0; k < 1000; ++k) {
    std::vector<double> t = {rng.uniform(-8.0, 8.0), rng.uniform(-8.0, 8.0),
                             rng.uniform(-8.0, 8.0)};
    for (const Domain* dom : {&ball, &box}) {
      const auto once = dom->project(t);
      const auto twice = dom->project(once);
      CHECK(once == twice);
      CHECK(dom->contains(once));
    }
  }
}

TEST_CASE("projection rejects width mismatches") {
  const auto box = Domain::cube(2, -1.0, 1.0);
  CHECK(check::error_code_of([&] { box.project({1.0, 2.0, 3.0}); }) == "dim-mismatch");
}

TEST_CASE("finite-difference check validates analytic gradients") {
  SUBCASE("quadratic is exact up to roundoff") {
    const auto data = make_dataset(2, {0.25, -0.5});
    const auto obj =
        empirical_loss(data, squared_distance_loss(2), Domain::cube(2, -5.0, 5.0));
    CHECK(fd_gradient_check(obj, {1.0, 2.0}, 1e-4) <= 1e-6);
  }
  SUBCASE("quartic benchmark at the origin") {
    const auto obj = st_objective(5);
    CHECK(fd_gradient_check(obj, std::vector<double>(5, 0.0), 1e-5) <= 1e-4);
  }
  SUBCASE("constant objective") {
    Objective c;
    c.dim = 2;
    c.domain = Domain::cube(2, -1.0, 1.0);
    c.value_fn = [](const double*) { return 3.5; };
    c.gradient_fn = [](const double*, double* g) { g[0] = g[1] = 0.0; };
    CHECK(fd_gradient_check(c, {0.1, 0.2}, 1e-4) <= 1e-10);
  }
  SUBCASE("boundary point is rejected") {
    const auto obj = st_objective(1);
    CHECK(check::error_code_of([&] { fd_gradient_check(obj, {5.0}, 1e-5); }) ==
          "boundary-point");
  }
}

TEST_CASE("objectives without an analytic gradient fall back to central differences") {
  Objective o;
  o.dim = 2;
  o.domain = Domain::cube(2, -5.0, 5.0);
  o.value_fn = [](const double* t) {
    return std::sin(t[0]) * std::cos(t[1]) + 0.5 * t[0] * t[0];
  };
  CHECK_FALSE(o.has_analytic_gradient());
  const std::vector<double> t = {0.7, -1.3};
  const auto g = o.gradient(t);
  CHECK(g[0] == doctest::Approx(std::cos(0.7) * std::cos(-1.3) + 0.7).epsilon(1e-7));
  CHECK(g[1] == doctest::Approx(-std::sin(0.7) * std::sin(-1.3)).epsilon(1e-7));
}

TEST_CASE("analytic gradients across the library match finite differences") {
  Rng rng(777);
  std::vector<Objective> objs;
  objs.push_back(st_objective(3));
  objs.push_back(double_well_1d(1.0));
  {
    const auto spec = gmm_default_instance();
    const auto dom = gmm_default_domain(spec);
    objs.push_back(gmm_population_objective(spec, dom));
    const auto data = gmm_sample(spec, 200, 5);
    objs.push_back(gmm_empirical_objective(spec, data, dom));
  }
  for (const auto& obj : objs) {
    for (int k = 0; k < 20; ++k) {
      std::vector<double> t(obj.dim);
      for (double& v : t) v = rng.uniform(-0.9, 0.9);
      const auto g = obj.gradient(t);
      double norm = 0.0;
      for (double v : g) norm += v * v;
      norm = std::sqrt(norm);
      CHECK(fd_gradient_check(obj, t, 1e-5) < 1e-3 * (1.0 + norm));
    }
  }
}
