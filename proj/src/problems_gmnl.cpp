#include "gibbsinit/problems.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gibbsinit/error.hpp"
#include "gibbsinit/fastmath.hpp"
#include "gibbsinit/io.hpp"
#include "gibbsinit/parallel.hpp"
#include "gibbsinit/rng.hpp"

namespace gibbsinit {

namespace {

constexpr int kMaxAlternatives = 64;

void validate(const GMNLSpec& spec) {
  if (spec.p <= 0 || spec.q <= 0 || spec.J <= 0) {
    throw Error("bad-theory-params", "choice model needs p, q, J all positive");
  }
  if (spec.J > kMaxAlternatives) {
    throw Error("bad-theory-params", "at most 64 alternatives supported");
  }
  if (spec.N == 0 || spec.R == 0) {
    throw Error("bad-theory-params", "need at least one customer and one simulation draw");
  }
  if (spec.phi_star.size() != static_cast<std::size_t>(spec.p) ||
      spec.psi_star.size() != static_cast<std::size_t>(spec.q)) {
    throw Error("dim-mismatch", "true coefficient vectors must match p and q");
  }
  if (!(spec.xi_sd >= 0.0)) throw Error("bad-theory-params", "shock scale must be nonnegative");
}

double gumbel_draw(Rng& rng) {
  double u;
  do {
    u = rng.uniform();
  } while (u <= 0.0);
  return -std::log(-std::log(u));
}

// Immutable evaluation state for one customer subset: attribute matrix,
// characteristics, observed choices, and the exponentiated frozen draws keyed
// by each row's global customer id.
struct Core {
  int p = 0, q = 0, J = 0;
  std::size_t R = 0;
  std::size_t n = 0;
  std::vector<double> products;    // J x p
  std::vector<double> z;           // n x q
  std::vector<int> choice;         // n
  std::vector<std::uint64_t> id;   // n
  std::vector<double> exp_draws;   // n x R
};

// Overflow is detected inside parallel loops, so it is recorded (lowest
// customer id, then lowest draw) and raised after the loop joins.
struct OverflowFlag {
  std::atomic<bool> hit{false};
  std::mutex m;
  std::uint64_t customer = 0;
  std::uint64_t draw = 0;

  void record(std::uint64_t c, std::uint64_t r) {
    std::lock_guard<std::mutex> lock(m);
    if (!hit.load(std::memory_order_relaxed) || c < customer || (c == customer && r < draw)) {
      customer = c;
      draw = r;
      hit.store(true, std::memory_order_relaxed);
    }
  }
  void raise() const {
    if (hit.load()) {
      throw Error("utility-overflow", "customer " + std::to_string(customer) + ", draw " +
                                          std::to_string(draw));
    }
  }
};

struct Workspace {
  std::vector<double> s, w, srow, lrow, wr;
};

// Negative log simulated likelihood contribution of customer row c; adds the
// matching gradient contribution into grad_acc[0..p+q) when non-null.
// theta = (phi, psi). Utilities enter the softmax already shifted by the
// per-draw max (s_r > 0, so that max is s_r * max_j a_j), which keeps every
// exponent nonpositive and every row sum in [1, J].
double customer_term(const Core& core, std::size_t c, const double* theta, double* grad_acc,
                     OverflowFlag& overflow) {
  static thread_local Workspace ws;
  const int p = core.p, q = core.q, J = core.J;
  const std::size_t R = core.R;
  const double* phi = theta;
  const double* psi = theta + p;
  const double* zrow = core.z.data() + c * static_cast<std::size_t>(q);

  double zpsi = 0.0;
  for (int k = 0; k < q; ++k) zpsi += zrow[k] * psi[k];
  const double t = fast_exp(zpsi);
  if (!std::isfinite(t)) {
    overflow.record(core.id[c], 0);
    return 0.0;
  }

  double a[kMaxAlternatives];
  double a_max = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < J; ++j) {
    const double* xj = core.products.data() + static_cast<std::size_t>(j) * p;
    double v = 0.0;
    for (int k = 0; k < p; ++k) v += xj[k] * phi[k];
    a[j] = v;
    a_max = std::max(a_max, v);
  }
  const int y = core.choice[c];
  const double ay_gap = a[y] - a_max;  // <= 0

  ws.s.resize(R);
  ws.w.resize(R * static_cast<std::size_t>(J));
  ws.srow.resize(R);
  ws.lrow.resize(R);
  ws.wr.resize(R);

  const double* E = core.exp_draws.data() + c * R;
  for (std::size_t r = 0; r < R; ++r) {
    const double s = t * E[r];
    if (!std::isfinite(s)) {
      overflow.record(core.id[c], r);
      return 0.0;
    }
    ws.s[r] = s;
  }
  for (std::size_t r = 0; r < R; ++r) {
    const double base = ws.s[r];
    double* wrow = ws.w.data() + r * static_cast<std::size_t>(J);
    for (int j = 0; j < J; ++j) wrow[j] = base * (a[j] - a_max);
  }
  exp_pointwise(ws.w.data(), ws.w.data(), ws.w.size());
  for (std::size_t r = 0; r < R; ++r) {
    const double* wrow = ws.w.data() + r * static_cast<std::size_t>(J);
    double total = 0.0;
    for (int j = 0; j < J; ++j) total += wrow[j];
    ws.srow[r] = total;
  }
  log_pointwise(ws.srow.data(), ws.lrow.data(), R);
  for (std::size_t r = 0; r < R; ++r) ws.lrow[r] = ws.s[r] * ay_gap - ws.lrow[r];

  const double peak = *std::max_element(ws.lrow.begin(), ws.lrow.end());
  if (!std::isfinite(peak)) {
    // Every draw assigns the observed choice probability zero: the likelihood
    // is -inf and the optimizer treats the point as diverged.
    return std::numeric_limits<double>::infinity();
  }
  for (std::size_t r = 0; r < R; ++r) ws.wr[r] = ws.lrow[r] - peak;
  exp_pointwise(ws.wr.data(), ws.wr.data(), R);
  double wsum = 0.0;
  for (std::size_t r = 0; r < R; ++r) wsum += ws.wr[r];
  const double loglik = peak + fast_log(wsum) - std::log(static_cast<double>(R));

  if (grad_acc != nullptr) {
    const double inv_w = 1.0 / wsum;
    double g = 0.0, b = 0.0;
    double cvec[kMaxAlternatives] = {0.0};
    for (std::size_t r = 0; r < R; ++r) {
      const double om_s = ws.wr[r] * inv_w * ws.s[r];
      g += om_s;
      const double inv_srow = 1.0 / ws.srow[r];
      const double* wrow = ws.w.data() + r * static_cast<std::size_t>(J);
      double ar = 0.0;
      for (int j = 0; j < J; ++j) {
        const double pij = wrow[j] * inv_srow;
        cvec[j] += om_s * pij;
        ar += pij * a[j];
      }
      b += om_s * (a[y] - ar);
    }
    cvec[y] -= g;
    for (int j = 0; j < J; ++j) {
      const double cj = cvec[j];
      const double* xj = core.products.data() + static_cast<std::size_t>(j) * p;
      for (int k = 0; k < p; ++k) grad_acc[k] += cj * xj[k];
    }
    for (int k = 0; k < q; ++k) grad_acc[p + k] -= b * zrow[k];
  }
  return -loglik;
}

std::shared_ptr<const Core> build_core(const GMNLInstance& instance, const Dataset& customers) {
  validate(instance.spec);
  const GMNLSpec& spec = instance.spec;
  if (customers.dim != spec.q + 2) {
    throw Error("dim-mismatch", "customer rows must be [id, characteristics, choice]");
  }
  if (customers.size() == 0) throw Error("empty-dataset", "no customer rows");
  if (instance.products.size() !=
      static_cast<std::size_t>(spec.J) * static_cast<std::size_t>(spec.p)) {
    throw Error("dim-mismatch", "product attribute matrix must be J x p");
  }
  if (instance.sim_draws.size() != spec.N * spec.R) {
    throw Error("dim-mismatch", "frozen draw matrix must be N x R");
  }
  auto core = std::make_shared<Core>();
  core->p = spec.p;
  core->q = spec.q;
  core->J = spec.J;
  core->R = spec.R;
  core->n = customers.size();
  core->products = instance.products;
  core->z.resize(core->n * static_cast<std::size_t>(spec.q));
  core->choice.resize(core->n);
  core->id.resize(core->n);
  core->exp_draws.resize(core->n * core->R);
  for (std::size_t c = 0; c < core->n; ++c) {
    const double* row = customers.row(c);
    const auto id = static_cast<std::uint64_t>(std::llround(row[0]));
    if (id >= spec.N) throw Error("dim-mismatch", "customer id outside the generated instance");
    const auto y = static_cast<int>(std::llround(row[spec.q + 1]));
    if (y < 0 || y >= spec.J) throw Error("dim-mismatch", "choice index outside [0, J)");
    core->id[c] = id;
    core->choice[c] = y;
    for (int k = 0; k < spec.q; ++k) core->z[c * static_cast<std::size_t>(spec.q) + k] = row[1 + k];
    exp_pointwise(instance.sim_draws.data() + id * spec.R, core->exp_draws.data() + c * core->R,
                  core->R);
  }
  return core;
}

}  // namespace

GMNLSpec gmnl_default_spec(std::uint64_t instance_seed, std::uint64_t draw_seed) {
  GMNLSpec spec;
  spec.phi_star.assign(static_cast<std::size_t>(spec.p), 1.0);
  for (int k = spec.p / 2; k < spec.p; ++k) spec.phi_star[static_cast<std::size_t>(k)] = -1.0;
  spec.psi_star.assign(static_cast<std::size_t>(spec.q), 1.0);
  spec.instance_seed = instance_seed;
  spec.draw_seed = draw_seed;
  return spec;
}

GMNLInstance gmnl_generate(const GMNLSpec& spec) {
  validate(spec);
  GMNLInstance instance;
  instance.spec = spec;
  Rng rng(spec.instance_seed);
  instance.products.resize(static_cast<std::size_t>(spec.J) * static_cast<std::size_t>(spec.p));
  for (double& v : instance.products) v = rng.gaussian();
  instance.customers.dim = spec.q + 2;
  instance.customers.values.reserve(spec.N * static_cast<std::size_t>(spec.q + 2));
  std::vector<double> row(static_cast<std::size_t>(spec.q) + 2);
  for (std::uint64_t n = 0; n < spec.N; ++n) {
    row[0] = static_cast<double>(n);
    double zpsi = 0.0;
    for (int k = 0; k < spec.q; ++k) {
      const double zk = rng.gaussian();
      row[1 + static_cast<std::size_t>(k)] = zk;
      zpsi += zk * spec.psi_star[static_cast<std::size_t>(k)];
    }
    zpsi += spec.xi_sd * rng.gaussian();
    const double scale = std::exp(zpsi);
    if (!std::isfinite(scale)) {
      throw Error("utility-overflow", "customer " + std::to_string(n) + ", draw 0");
    }
    int y = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < spec.J; ++j) {
      const double* xj = instance.products.data() + static_cast<std::size_t>(j) * spec.p;
      double u = 0.0;
      for (int k = 0; k < spec.p; ++k) u += xj[k] * spec.phi_star[static_cast<std::size_t>(k)];
      u = scale * u + gumbel_draw(rng);
      if (u > best) {
        best = u;
        y = j;
      }
    }
    row[static_cast<std::size_t>(spec.q) + 1] = static_cast<double>(y);
    instance.customers.push_row(row.data());
  }
  Rng draws(spec.draw_seed);
  instance.sim_draws = draws.gaussian_vector(spec.N * spec.R);
  return instance;
}

Domain gmnl_sampling_domain(const GMNLSpec& spec) {
  return Domain::cube(spec.p + spec.q, -3.0, 3.0);
}

Objective gmnl_sim_nll(const GMNLInstance& instance, const Dataset& customers,
                       const Domain& domain) {
  auto core = build_core(instance, customers);
  const int dim = instance.spec.p + instance.spec.q;
  domain.check_width(static_cast<std::size_t>(dim));
  Objective obj;
  obj.dim = dim;
  obj.domain = domain;
  obj.deterministic = true;  // simulation draws frozen per instance
  const double inv_n = 1.0 / static_cast<double>(core->n);
  obj.value_fn = [core, inv_n](const double* theta) {
    OverflowFlag overflow;
    const double total = blocked_sum(core->n, [&](std::size_t c) {
      return customer_term(*core, c, theta, nullptr, overflow);
    });
    overflow.raise();
    return total * inv_n;
  };
  obj.gradient_fn = [core, inv_n, dim](const double* theta, double* grad) {
    OverflowFlag overflow;
    const std::vector<double> sum = blocked_vector_sum(
        core->n, static_cast<std::size_t>(dim),
        [&](std::size_t c, double* acc) { (void)customer_term(*core, c, theta, acc, overflow); });
    overflow.raise();
    for (int k = 0; k < dim; ++k) grad[k] = sum[static_cast<std::size_t>(k)] * inv_n;
  };
  return obj;
}

void write_gmnl_instance(const GMNLInstance& instance, const std::string& dir) {
  validate(instance.spec);
  const GMNLSpec& spec = instance.spec;
  std::filesystem::create_directories(dir);

  auto write_table = [](const std::string& path, const std::string& prefix, int width,
                        const double* data, std::size_t rows) {
    std::string out;
    for (int k = 0; k < width; ++k) {
      if (k > 0) out += ',';
      out += prefix + std::to_string(k);
    }
    out += '\n';
    for (std::size_t i = 0; i < rows; ++i) {
      const double* row = data + i * static_cast<std::size_t>(width);
      for (int k = 0; k < width; ++k) {
        if (k > 0) out += ',';
        out += format_double(row[k]);
      }
      out += '\n';
    }
    write_text_file(path, out);
  };

  write_table(dir + "/products.csv", "attr_", spec.p, instance.products.data(),
              static_cast<std::size_t>(spec.J));

  std::vector<double> z(spec.N * static_cast<std::size_t>(spec.q));
  std::vector<double> y(spec.N);
  for (std::uint64_t n = 0; n < spec.N; ++n) {
    const double* row = instance.customers.row(n);
    for (int k = 0; k < spec.q; ++k) z[n * static_cast<std::size_t>(spec.q) + k] = row[1 + k];
    y[n] = row[spec.q + 1];
  }
  write_table(dir + "/customers.csv", "char_", spec.q, z.data(), spec.N);
  write_table(dir + "/choices.csv", "choice_", 1, y.data(), spec.N);

  nlohmann::ordered_json j;
  j["p"] = spec.p;
  j["q"] = spec.q;
  j["J"] = spec.J;
  j["N"] = spec.N;
  j["R"] = spec.R;
  j["xi_sd"] = spec.xi_sd;
  j["phi_star"] = spec.phi_star;
  j["psi_star"] = spec.psi_star;
  j["instance_seed"] = spec.instance_seed;
  j["draw_seed"] = spec.draw_seed;
  write_text_file(dir + "/spec.json", j.dump(2) + "\n");
}

GMNLInstance read_gmnl_instance(const std::string& dir) {
  const nlohmann::json j = nlohmann::json::parse(read_text_file(dir + "/spec.json"));
  GMNLSpec spec;
  spec.p = j.at("p").get<int>();
  spec.q = j.at("q").get<int>();
  spec.J = j.at("J").get<int>();
  spec.N = j.at("N").get<std::uint64_t>();
  spec.R = j.at("R").get<std::uint64_t>();
  spec.xi_sd = j.at("xi_sd").get<double>();
  spec.phi_star = j.at("phi_star").get<std::vector<double>>();
  spec.psi_star = j.at("psi_star").get<std::vector<double>>();
  spec.instance_seed = j.at("instance_seed").get<std::uint64_t>();
  spec.draw_seed = j.at("draw_seed").get<std::uint64_t>();
  validate(spec);

  const Dataset products = read_dataset_csv(dir + "/products.csv", true);
  const Dataset z = read_dataset_csv(dir + "/customers.csv", true);
  const Dataset choices = read_dataset_csv(dir + "/choices.csv", true);
  if (products.dim != spec.p || products.size() != static_cast<std::size_t>(spec.J)) {
    throw Error("dim-mismatch", "product table does not match the stored parameters");
  }
  if (z.dim != spec.q || z.size() != spec.N || choices.dim != 1 || choices.size() != spec.N) {
    throw Error("dim-mismatch", "customer tables do not match the stored parameters");
  }

  GMNLInstance instance;
  instance.spec = spec;
  instance.products = products.values;
  instance.customers.dim = spec.q + 2;
  std::vector<double> row(static_cast<std::size_t>(spec.q) + 2);
  for (std::uint64_t n = 0; n < spec.N; ++n) {
    row[0] = static_cast<double>(n);
    for (int k = 0; k < spec.q; ++k) row[1 + static_cast<std::size_t>(k)] = z.row(n)[k];
    row[static_cast<std::size_t>(spec.q) + 1] = choices.row(n)[0];
    instance.customers.push_row(row.data());
  }
  Rng draws(spec.draw_seed);
  instance.sim_draws = draws.gaussian_vector(spec.N * spec.R);
  return instance;
}

}  // namespace gibbsinit
