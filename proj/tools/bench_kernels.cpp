#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <vector>

#include <CLI11.hpp>

#include "gibbsinit/objective.hpp"
#include "gibbsinit/parallel.hpp"
#include "gibbsinit/problems.hpp"
#include "gibbsinit/rng.hpp"

namespace {

using clock_type = std::chrono::steady_clock;

double time_ms(int repeats, const std::function<void()>& body) {
  body();  // warm-up
  const auto t0 = clock_type::now();
  for (int r = 0; r < repeats; ++r) body();
  return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count() / repeats;
}

bool bits_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

void report(const char* name, double serial_ms, double parallel_ms, bool identical) {
  std::printf("%-28s %12.3f %12.3f %8.2fx %10s\n", name, serial_ms, parallel_ms,
              serial_ms / parallel_ms, identical ? "bit-exact" : "DIFFERS");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serial reference vs parallel blocked kernels"};
  std::size_t n = 10'000'000;
  int repeats = 5;
  app.add_option("--n", n, "reduction length");
  app.add_option("--repeats", repeats, "timed repetitions per kernel");
  CLI11_PARSE(app, argc, argv);

  namespace gi = gibbsinit;
  const int workers = gi::max_workers();
  std::printf("workers available: %d\n", workers);
  std::printf("%-28s %12s %12s %9s %10s\n", "kernel", "serial ms", "parallel ms", "speedup",
              "1 vs max");

  gi::Rng rng(12345);
  std::vector<double> x(n);
  for (double& v : x) v = rng.uniform(-1.0, 1.0);

  // Scalar reduction. The blocked tree gives one fixed answer for any worker
  // count; the serial left-to-right sum is the cross-check reference.
  double serial_value = 0.0, blocked_value = 0.0;
  const double t_serial =
      time_ms(repeats, [&] { serial_value = gi::serial_sum(x.data(), x.size()); });
  gi::set_workers(1);
  double blocked_one = gi::blocked_sum(x.data(), x.size());
  gi::set_workers(workers);
  const double t_blocked =
      time_ms(repeats, [&] { blocked_value = gi::blocked_sum(x.data(), x.size()); });
  report("sum reduction", t_serial, t_blocked, blocked_one == blocked_value);
  std::printf("    serial vs blocked |diff| = %.3e\n", std::fabs(serial_value - blocked_value));

  // Vector reduction, width 8.
  constexpr std::size_t kWidth = 8;
  const std::size_t rows = n / kWidth;
  auto add_row = [&](std::size_t i, double* acc) {
    const double* row = x.data() + i * kWidth;
    for (std::size_t k = 0; k < kWidth; ++k) acc[k] += row[k];
  };
  std::vector<double> vec_serial(kWidth, 0.0);
  const double tv_serial = time_ms(repeats, [&] {
    std::fill(vec_serial.begin(), vec_serial.end(), 0.0);
    for (std::size_t i = 0; i < rows; ++i) add_row(i, vec_serial.data());
  });
  gi::set_workers(1);
  const std::vector<double> vec_one = gi::blocked_vector_sum(rows, kWidth, add_row);
  gi::set_workers(workers);
  std::vector<double> vec_max;
  const double tv_blocked =
      time_ms(repeats, [&] { vec_max = gi::blocked_vector_sum(rows, kWidth, add_row); });
  report("vector sum (width 8)", tv_serial, tv_blocked, bits_equal(vec_one, vec_max));

  // Mixture empirical loss: value + gradient over a 2000-point dataset.
  const gi::GMMSpec spec = gi::gmm_default_instance();
  const gi::Domain dom = gi::gmm_default_domain(spec);
  const gi::Dataset data = gi::gmm_sample(spec, 2000, 424242);
  const gi::Objective emp = gi::gmm_empirical_objective(spec, data, dom);
  const std::vector<double> theta(spec.d, 0.25);
  std::vector<double> g1, g2;
  double v1 = 0.0, v2 = 0.0;
  gi::set_workers(1);
  const double tg_serial = time_ms(repeats, [&] {
    v1 = emp.value(theta);
    g1 = emp.gradient(theta);
  });
  gi::set_workers(workers);
  const double tg_parallel = time_ms(repeats, [&] {
    v2 = emp.value(theta);
    g2 = emp.gradient(theta);
  });
  report("mixture loss (n=2000)", tg_serial, tg_parallel, v1 == v2 && bits_equal(g1, g2));

  // Simulated choice likelihood: N=1000 customers, R=100 draws.
  const gi::GMNLInstance inst = gi::gmnl_generate(gi::gmnl_default_spec(20240818, 20240819));
  const gi::Objective nll =
      gi::gmnl_sim_nll(inst, inst.customers, gi::gmnl_sampling_domain(inst.spec));
  std::vector<double> phi(inst.spec.p + inst.spec.q, 0.1);
  gi::set_workers(1);
  const double tn_serial = time_ms(repeats, [&] {
    v1 = nll.value(phi);
    g1 = nll.gradient(phi);
  });
  gi::set_workers(workers);
  const double tn_parallel = time_ms(repeats, [&] {
    v2 = nll.value(phi);
    g2 = nll.gradient(phi);
  });
  report("choice likelihood(N=1000)", tn_serial, tn_parallel, v1 == v2 && bits_equal(g1, g2));
  return 0;
}
