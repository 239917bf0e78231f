#include "gibbsinit/problems.hpp"

#include <cmath>
#include <cstring>
#include <memory>
#include <numeric>
#include <utility>

#include "gibbsinit/error.hpp"
#include "gibbsinit/fastmath.hpp"
#include "gibbsinit/parallel.hpp"
#include "gibbsinit/rng.hpp"

namespace gibbsinit {

namespace {

constexpr double kPi = 3.14159265358979323846;

double squared_distance(const double* a, const double* b, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return s;
}

}  // namespace

void validate(const GMMSpec& spec) {
  if (spec.d <= 0 || spec.M <= 0) throw Error("bad-theory-params", "mixture needs d > 0 and M > 0");
  if (!(spec.sigma > 0.0)) throw Error("bad-theory-params", "mixture bandwidth must be positive");
  if (spec.means.size() != static_cast<std::size_t>(spec.M) * static_cast<std::size_t>(spec.d)) {
    throw Error("dim-mismatch", "means array must be M x d");
  }
  if (spec.weights.size() != static_cast<std::size_t>(spec.M)) {
    throw Error("dim-mismatch", "weights array must have M entries");
  }
  double total = 0.0;
  for (double w : spec.weights) {
    if (!(w >= 0.0)) throw Error("bad-theory-params", "mixture weights must be nonnegative");
    total += w;
  }
  if (std::fabs(total - 1.0) > 1e-9) throw Error("bad-theory-params", "mixture weights must sum to 1");
}

GMMSpec gmm_instance(int d, int M, double sigma, double mean_halfwidth, double min_separation,
                     std::vector<double> weights, std::uint64_t seed) {
  GMMSpec spec;
  spec.d = d;
  spec.M = M;
  spec.sigma = sigma;
  if (weights.empty()) {
    weights.assign(static_cast<std::size_t>(M), 1.0 / static_cast<double>(M));
  }
  spec.weights = std::move(weights);
  spec.means.resize(static_cast<std::size_t>(M) * static_cast<std::size_t>(d));
  Rng rng(seed);
  const double minsep2 = min_separation * min_separation;
  for (int i = 0; i < M; ++i) {
    double* mi = spec.means.data() + static_cast<std::size_t>(i) * d;
    bool placed = false;
    for (int attempt = 0; attempt < 100000 && !placed; ++attempt) {
      for (int k = 0; k < d; ++k) mi[k] = rng.uniform(-mean_halfwidth, mean_halfwidth);
      placed = true;
      for (int j = 0; j < i; ++j) {
        const double* mj = spec.means.data() + static_cast<std::size_t>(j) * d;
        if (squared_distance(mi, mj, d) < minsep2) {
          placed = false;
          break;
        }
      }
    }
    if (!placed) throw Error("bad-theory-params", "could not separate mixture means");
  }
  validate(spec);
  return spec;
}

GMMSpec gmm_default_instance() {
  const int M = 10;
  std::vector<double> weights(M, 0.7 / 9.0);
  weights[0] = 0.3;
  return gmm_instance(5, M, 0.1, 3.0, 1.0, std::move(weights), 20240817u);
}

Domain gmm_default_domain(const GMMSpec& spec) { return Domain::cube(spec.d, -3.5, 3.5); }

Objective gmm_population_objective(const GMMSpec& spec, const Domain& domain) {
  validate(spec);
  domain.check_width(static_cast<std::size_t>(spec.d));
  auto shared = std::make_shared<const GMMSpec>(spec);
  const int d = spec.d;
  const int M = spec.M;
  const double var2 = 4.0 * spec.sigma * spec.sigma;  // kernel scale after convolution
  const double amp = std::pow(kPi * var2, -0.5 * d);
  Objective obj;
  obj.dim = d;
  obj.domain = domain;
  obj.deterministic = true;
  obj.value_fn = [shared, d, M, var2, amp](const double* theta) {
    double total = 0.0;
    for (int i = 0; i < M; ++i) {
      const double* mi = shared->means.data() + static_cast<std::size_t>(i) * d;
      total += shared->weights[static_cast<std::size_t>(i)] *
               fast_exp(-squared_distance(theta, mi, d) / var2);
    }
    return -amp * total;
  };
  obj.gradient_fn = [shared, d, M, var2, amp](const double* theta, double* grad) {
    for (int k = 0; k < d; ++k) grad[k] = 0.0;
    for (int i = 0; i < M; ++i) {
      const double* mi = shared->means.data() + static_cast<std::size_t>(i) * d;
      const double e = shared->weights[static_cast<std::size_t>(i)] *
                       fast_exp(-squared_distance(theta, mi, d) / var2);
      const double scale = 2.0 * amp * e / var2;
      for (int k = 0; k < d; ++k) grad[k] += scale * (theta[k] - mi[k]);
    }
  };
  return obj;
}

PointwiseLoss gmm_pointwise_loss(const GMMSpec& spec) {
  validate(spec);
  const int d = spec.d;
  const double var = spec.sigma * spec.sigma;
  const double amp = std::pow(2.0 * kPi * var, -0.5 * d);
  PointwiseLoss loss;
  loss.value = [d, var, amp](const double* theta, const double* x) {
    return -amp * fast_exp(-squared_distance(theta, x, d) / (2.0 * var));
  };
  loss.gradient = [d, var, amp](const double* theta, const double* x, double* grad) {
    const double e = amp * fast_exp(-squared_distance(theta, x, d) / (2.0 * var));
    for (int k = 0; k < d; ++k) grad[k] = e * (theta[k] - x[k]) / var;
  };
  return loss;
}

Objective gmm_empirical_objective(const GMMSpec& spec, const Dataset& data, const Domain& domain) {
  if (data.dim != spec.d) throw Error("dim-mismatch", "dataset dimension does not match mixture");
  return empirical_loss(data, gmm_pointwise_loss(spec), domain);
}

Dataset gmm_sample(const GMMSpec& spec, std::uint64_t count, std::uint64_t seed) {
  validate(spec);
  Dataset data;
  data.dim = spec.d;
  data.values.resize(count * static_cast<std::size_t>(spec.d));
  Rng rng(seed);
  std::vector<double> cumulative(spec.weights.size());
  std::partial_sum(spec.weights.begin(), spec.weights.end(), cumulative.begin());
  cumulative.back() = 1.0;
  for (std::uint64_t j = 0; j < count; ++j) {
    const double u = rng.uniform();
    int comp = 0;
    while (comp + 1 < spec.M && u > cumulative[static_cast<std::size_t>(comp)]) ++comp;
    const double* m = spec.means.data() + static_cast<std::size_t>(comp) * spec.d;
    double* row = data.values.data() + j * static_cast<std::size_t>(spec.d);
    for (int k = 0; k < spec.d; ++k) row[k] = m[k] + spec.sigma * rng.gaussian();
  }
  return data;
}

Objective gmm_batched_gradient_objective(const GMMSpec& spec, const Domain& domain,
                                         std::uint64_t batch, std::uint64_t seed) {
  if (batch == 0) throw Error("empty-dataset", "gradient batch must be nonempty");
  if (spec.d > 64) throw Error("dim-mismatch", "batched gradient supports up to 64 dimensions");
  Objective obj = gmm_population_objective(spec, domain);
  auto data = std::make_shared<const Dataset>(gmm_sample(spec, batch, seed));
  auto loss = std::make_shared<const PointwiseLoss>(gmm_pointwise_loss(spec));
  const int d = spec.d;
  obj.deterministic = true;  // batch frozen at construction
  obj.gradient_fn = [data, loss, d](const double* theta, double* grad) {
    const std::size_t n = data->size();
    const std::vector<double> sum =
        blocked_vector_sum(n, static_cast<std::size_t>(d), [&](std::size_t j, double* acc) {
          double g[64];
          loss->gradient(theta, data->row(j), g);
          for (int k = 0; k < d; ++k) acc[k] += g[k];
        });
    const double inv = 1.0 / static_cast<double>(n);
    for (int k = 0; k < d; ++k) grad[k] = sum[static_cast<std::size_t>(k)] * inv;
  };
  return obj;
}

}  // namespace gibbsinit
