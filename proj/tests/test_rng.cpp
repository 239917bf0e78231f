#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "gibbsinit/rng.hpp"

#include "support/stats.hpp"

using gibbsinit::Rng;
using gibbsinit::derive_seed;
using gibbsinit::splitmix64;

TEST_CASE("splitmix64 matches the published reference outputs for seed 1234567") {
  // First three outputs of the reference implementation (Vigna) from state
  // 1234567, frozen from an independent run of the published C code.
  std::uint64_t s = 1234567;
  CHECK(splitmix64(s) == 6457827717110365317ULL);
  CHECK(splitmix64(s) == 3203168211198807973ULL);
  CHECK(splitmix64(s) == 9817491932198370423ULL);
}

TEST_CASE("uniform stays in the half-open unit interval with matching mean") {
  Rng rng(42);
  double mn = 1.0, mx = 0.0, sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    mn = std::min(mn, u);
    mx = std::max(mx, u);
    sum += u;
  }
  CHECK(mn >= 0.0);
  CHECK(mx < 1.0);
  // se of the mean is (1/sqrt(12))/sqrt(n) ~ 6.5e-4; allow 4 se.
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.006));
  Rng rng2(42);
  CHECK(rng2.uniform(2.0, 6.0) >= 2.0);
  CHECK(Rng(42).uniform(2.0, 6.0) < 6.0);
}

TEST_CASE("below is unbiased over small ranges") {
  Rng rng(7);
  const std::uint64_t n = 5;
  std::vector<int> counts(n, 0);
  const int draws = 250000;
  for (int i = 0; i < draws; ++i) ++counts[rng.below(n)];
  for (std::uint64_t k = 0; k < n; ++k) {
    const double p = double(counts[k]) / draws;
    CHECK(std::fabs(p - 0.2) < 4.0 * stat::binomial_se(0.2, draws));
  }
}

TEST_CASE("below covers the full range and handles n=1") {
  Rng rng(9);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 200; ++i) seen.insert(rng.below(7));
  CHECK(seen.size() == 7);
  for (int i = 0; i < 10; ++i) CHECK(rng.below(1) == 0);
}

TEST_CASE("gaussian moments match the standard normal") {
  Rng rng(123);
  const int n = 400000;
  std::vector<double> z(n);
  for (double& v : z) v = rng.gaussian();
  CHECK(std::fabs(stat::mean(z)) < 4.0 / std::sqrt(double(n)));
  CHECK(stat::variance(z) == doctest::Approx(1.0).epsilon(0.02));
  // Fourth moment 3 checks the tails are genuinely normal.
  double m4 = 0.0;
  for (double v : z) m4 += v * v * v * v;
  CHECK(m4 / n == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("identical seeds give identical streams, different seeds differ") {
  Rng a(555), b(555), c(556);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t x = a.next_u64();
    all_equal = all_equal && (x == b.next_u64());
    any_diff = any_diff || (x != c.next_u64());
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("gaussian spare caching keeps the stream aligned") {
  // Drawing 2k singles equals drawing one 2k vector draw-for-draw.
  Rng a(31), b(31);
  const std::vector<double> vec = b.gaussian_vector(10);
  for (int i = 0; i < 10; ++i) CHECK(a.gaussian() == vec[i]);
  // And an odd-length vector leaves a cached spare that the next call uses.
  Rng c(77), d(77);
  const std::vector<double> odd = c.gaussian_vector(3);
  const double fourth = c.gaussian();
  const std::vector<double> four = d.gaussian_vector(4);
  CHECK(odd[2] == four[2]);
  CHECK(fourth == four[3]);
}

TEST_CASE("derive_seed separates streams and is deterministic") {
  CHECK(derive_seed(1, 2) == derive_seed(1, 2));
  CHECK(derive_seed(1, 2) != derive_seed(1, 3));
  CHECK(derive_seed(1, 2) != derive_seed(2, 2));
  // Streams derived from consecutive masters/streams should look unrelated:
  // check there are no collisions over a grid.
  std::set<std::uint64_t> seen;
  for (std::uint64_t m = 0; m < 100; ++m) {
    for (std::uint64_t s = 0; s < 100; ++s) seen.insert(derive_seed(m, s));
  }
  CHECK(seen.size() == 100 * 100);
}

TEST_CASE("derived child streams do not collide with the parent stream") {
  const std::uint64_t parent = derive_seed(900, 4);
  Rng p(parent);
  Rng c0(derive_seed(parent, 0)), c1(derive_seed(parent, 1));
  // First outputs all distinct (overlap would correlate replications).
  std::set<std::uint64_t> firsts = {p.next_u64(), c0.next_u64(), c1.next_u64()};
  CHECK(firsts.size() == 3);
}
