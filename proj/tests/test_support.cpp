#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

// Sanity checks for the reference implementations the other tests freeze
// their expected values from. Nothing here touches the library.

#include <cmath>
#include <random>
#include <vector>

#include "support/oracles.hpp"
#include "support/stats.hpp"

TEST_CASE("bisection finds straddled roots") {
  const double r = oracle::bisect([](double t) { return t * t - 4.0; }, 0.0, 5.0);
  CHECK(r == doctest::Approx(2.0).epsilon(1e-12));
  const double c = oracle::bisect([](double t) { return std::cos(t); }, 0.0, 3.0);
  CHECK(c == doctest::Approx(M_PI / 2).epsilon(1e-12));
}

TEST_CASE("golden-section minimizes unimodal functions") {
  const double m = oracle::golden_min([](double t) { return (t - 1.25) * (t - 1.25); }, -4.0, 4.0);
  CHECK(m == doctest::Approx(1.25).epsilon(1e-9));
}

TEST_CASE("trapezoid integrates smooth functions") {
  CHECK(oracle::trapezoid([](double t) { return std::sin(t); }, 0.0, M_PI, 100000) ==
        doctest::Approx(2.0).epsilon(1e-9));
  CHECK(oracle::trapezoid([](double) { return 3.0; }, -1.0, 5.0, 10) == doctest::Approx(18.0));
}

TEST_CASE("gibbs mass of the whole interval is one") {
  const auto f = [](double t) { return t * t; };
  CHECK(oracle::gibbs_mass(f, 3.0, -2.0, 2.0, -2.0, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
  // beta = 0 reduces to length ratio.
  CHECK(oracle::gibbs_mass(f, 0.0, -2.0, 2.0, 0.0, 1.0) == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("gibbs cdf endpoints and monotonicity") {
  const auto cdf = oracle::gibbs_cdf([](double t) { return t * t; }, 2.0, -1.0, 1.0, 20000);
  CHECK(cdf(-1.0) == 0.0);
  CHECK(cdf(1.0) == 1.0);
  CHECK(cdf(0.0) == doctest::Approx(0.5).epsilon(1e-9));  // symmetric target
  double prev = 0.0;
  for (double t = -1.0; t <= 1.0; t += 0.01) {
    CHECK(cdf(t) >= prev);
    prev = cdf(t);
  }
}

TEST_CASE("ks statistic detects exact and shifted laws") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> samples(20000);
  for (double& s : samples) s = u(gen);
  const auto identity = [](double t) { return t; };
  CHECK(oracle::ks_statistic(samples, identity) < 0.015);
  const auto shifted = [](double t) { return std::clamp(t - 0.1, 0.0, 1.0); };
  CHECK(oracle::ks_statistic(samples, shifted) > 0.05);
}

TEST_CASE("ols slope recovers exact lines") {
  std::vector<double> x, y;
  for (int i = 0; i < 10; ++i) {
    x.push_back(i);
    y.push_back(3.0 - 0.5 * i);
  }
  CHECK(oracle::ols_slope(x, y) == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("plain 1-D gradient descent contracts a quadratic") {
  const double t = oracle::gd_1d([](double t) { return 2.0 * t; }, 1.0, 0.1, 50, -10.0, 10.0);
  CHECK(t == doctest::Approx(std::pow(0.8, 50)).epsilon(1e-12));
}

TEST_CASE("quartic coordinate roots are stationary and ordered") {
  const double deep = oracle::st_root_deep();
  const double mid = oracle::st_root_mid();
  const double shallow = oracle::st_root_shallow();
  CHECK(std::fabs(oracle::st_dg(deep)) < 1e-10);
  CHECK(std::fabs(oracle::st_dg(mid)) < 1e-10);
  CHECK(std::fabs(oracle::st_dg(shallow)) < 1e-10);
  CHECK(deep < mid);
  CHECK(mid < shallow);
  CHECK(oracle::st_g(deep) < oracle::st_g(shallow));
}

TEST_CASE("statistics helpers") {
  const std::vector<double> v = {1.0, 2.0, 3.0, 4.0};
  CHECK(stat::mean(v) == doctest::Approx(2.5));
  CHECK(stat::variance(v) == doctest::Approx(5.0 / 3.0));
  CHECK(stat::median(v) == doctest::Approx(2.5));
  CHECK(stat::median({5.0, 1.0, 9.0}) == doctest::Approx(5.0));
  CHECK(stat::binomial_se(0.5, 100.0) == doctest::Approx(0.05));
  // Bootstrap median se: of the order sd/sqrt(n) for a smooth sample.
  std::mt19937_64 gen(3);
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<double> big(4000);
  for (double& x : big) x = z(gen);
  const double se = stat::bootstrap_median_se(big, 400, 11);
  CHECK(se > 0.01);
  CHECK(se < 0.04);
}
