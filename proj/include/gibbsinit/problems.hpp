#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gibbsinit/objective.hpp"

namespace gibbsinit {

// ---------------------------------------------------------------- Styblinski-Tang

// Per-coordinate term (t^4 - 16 t^2 + 5 t) / 2.
double st_coordinate(double t);

// F(theta) = (1/d) * sum_i st_coordinate(theta_i) on the box [-5,5]^d, with
// analytic gradient and per-coordinate separable structure.
Objective st_objective(int dim);

// ------------------------------------------------------- Gaussian mixture modes

struct GMMSpec {
  int d = 0;
  int M = 0;
  double sigma = 0.0;
  std::vector<double> means;    // M x d row-major
  std::vector<double> weights;  // simplex over M components
};

void validate(const GMMSpec& spec);

// Means drawn uniformly from [-mean_halfwidth, mean_halfwidth]^d under the
// seed, redrawn until all pairwise distances reach min_separation. Empty
// weights mean uniform.
GMMSpec gmm_instance(int d, int M, double sigma, double mean_halfwidth, double min_separation,
                     std::vector<double> weights, std::uint64_t seed);

// The shipped mode-finding instance: d=5, M=10, sigma=0.1, dominant first
// component (weight 0.3), means separated by at least 1.0, seed 20240817.
GMMSpec gmm_default_instance();

// Box [-3.5, 3.5]^d enclosing the default means with margin.
Domain gmm_default_domain(const GMMSpec& spec);

// Closed form via Gaussian convolution:
//   value(theta) = -sum_i p_i * (4 pi sigma^2)^(-d/2) * exp(-|theta-m_i|^2/(4 sigma^2))
Objective gmm_population_objective(const GMMSpec& spec, const Domain& domain);

// F-hat(theta) = -(1/n) sum_j (2 pi sigma^2)^(-d/2) * exp(-|theta-x_j|^2/(2 sigma^2)).
Objective gmm_empirical_objective(const GMMSpec& spec, const Dataset& data, const Domain& domain);

// The same negated kernel as a per-example loss, for empirical_loss.
PointwiseLoss gmm_pointwise_loss(const GMMSpec& spec);

// Mixture draws: categorical component by weight, Gaussian around its mean.
Dataset gmm_sample(const GMMSpec& spec, std::uint64_t count, std::uint64_t seed);

// Analytic closed-form value; gradient estimated as the batch mean of
// pointwise kernel gradients over `batch` mixture draws frozen at
// construction from `seed` (one batch per trajectory).
Objective gmm_batched_gradient_objective(const GMMSpec& spec, const Domain& domain,
                                         std::uint64_t batch, std::uint64_t seed);

// ------------------------------------------------- generalized multinomial logit

struct GMNLSpec {
  int p = 10;  // product attribute dimension
  int q = 5;   // customer characteristic dimension
  int J = 5;   // alternatives per choice
  std::uint64_t N = 1000;  // customers
  std::uint64_t R = 100;   // simulation draws per customer
  std::vector<double> phi_star;  // true attribute coefficients (p)
  std::vector<double> psi_star;  // true scaling coefficients (q)
  double xi_sd = 1.0;            // generation shock scale; 0 gives plain MNL
  std::uint64_t instance_seed = 0;
  std::uint64_t draw_seed = 0;   // frozen simulation draws (common random numbers)
};

// Paper-style defaults: p=10, q=5, J=5, N=1000, R=100,
// phi* = (1,...,1,-1,...,-1), psi* = (1,...,1).
GMNLSpec gmnl_default_spec(std::uint64_t instance_seed, std::uint64_t draw_seed);

struct GMNLInstance {
  GMNLSpec spec;
  std::vector<double> products;  // J x p attribute rows, shared by all customers
  // One row per customer: [customer_id, z_1..z_q, choice]; the id column keys
  // the frozen draws, so subsampled rows keep their own draws.
  Dataset customers;
  std::vector<double> sim_draws;  // N x R standard normal draws, frozen
};

// Simulates utilities U_nj = x_j'phi_n + Gumbel with
// phi_n = exp(z_n'psi* + xi_n) * phi*, records argmax choices, and attaches
// fresh frozen simulation draws (independent of the generation shocks).
GMNLInstance gmnl_generate(const GMNLSpec& spec);

// Box [-3,3]^(p+q) used for exploration sampling and random starts.
Domain gmnl_sampling_domain(const GMNLSpec& spec);

// Simulated negative log-likelihood over the given customer rows (any subset
// of instance.customers), using the instance's frozen draws; log-sum-exp
// stabilized, analytic gradient. theta = (phi, psi) of width p + q.
Objective gmnl_sim_nll(const GMNLInstance& instance, const Dataset& customers,
                       const Domain& domain);

// CSV triplet (products.csv J x p, customers.csv N x q, choices.csv one
// 0-based index per row) plus spec.json including the frozen-draw seed.
void write_gmnl_instance(const GMNLInstance& instance, const std::string& dir);
GMNLInstance read_gmnl_instance(const std::string& dir);

// ----------------------------------------------------------------- double well

// F(t) = (t^2-1)^2 + (gap/4)*(t^3-3t) on [-radius_scale, radius_scale]:
// minima exactly at +1 (deep) and -1 (shallow), F(-1) - F(+1) = gap, local
// max at t = -3*gap/16. Requires gap < 16/3 so the two minima survive.
Objective double_well_1d(double gap, double radius_scale = 2.5);

}  // namespace gibbsinit
