#ifndef DECOPT_ORACLE_HPP
#define DECOPT_ORACLE_HPP

#include <cstdint>
#include <functional>

#include <Eigen/Core>

#include "decopt/rng.hpp"

namespace decopt::oracle {

using Eigen::VectorXd;

// Noise model for stochastic oracles. The first-order oracle adds a fixed
// bias vector of norm grad_bias plus per-coordinate Gaussian noise with
// total standard deviation grad_sigma. The zeroth-order oracle returns
// f(x,xi) + delta(x) with E[f(x,xi)] = f(x): an additive Gaussian value
// term (value_sigma, indexed by xi so paired evaluations share it) plus the
// bounded non-random term delta(x) = delta_bound * sign(sin(sum_i x_i)).
struct NoiseConfig {
  double grad_sigma = 0.0;
  double grad_bias = 0.0;
  double value_sigma = 0.0;
  double delta_bound = 0.0;
};

struct Counters {
  std::uint64_t value_calls = 0;
  std::uint64_t grad_calls = 0;
  std::uint64_t stoch_grad_calls = 0;
  std::uint64_t zeroth_calls = 0;
};

class OracleSuite {
 public:
  using ValueFn = std::function<double(const VectorXd&)>;
  using GradFn = std::function<VectorXd(const VectorXd&)>;

  OracleSuite(int dim, ValueFn value, GradFn grad_or_subgrad,
              NoiseConfig noise = {});

  int dim() const { return dim_; }
  const NoiseConfig& noise() const { return noise_; }

  double value(const VectorXd& x);
  // uncounted clean value for diagnostics
  double value_raw(const VectorXd& x) const { return value_(x); }
  VectorXd gradient(const VectorXd& x);
  VectorXd subgradient(const VectorXd& x) { return gradient(x); }
  VectorXd stochastic_gradient(const VectorXd& x, Rng& rng);

  // One noisy function query; xi indexes the stochastic realization so that
  // two evaluations with the same xi share it.
  double zeroth_value(const VectorXd& x, std::uint64_t xi);

  double bounded_noise(const VectorXd& x) const;  // the delta(x) term

  const Counters& counters() const { return counters_; }
  void reset_counters() { counters_ = Counters{}; }

 private:
  int dim_;
  ValueFn value_;
  GradFn grad_;
  NoiseConfig noise_;
  VectorXd bias_direction_;
  Counters counters_;
};

// Uniform sample from the unit Euclidean sphere (Gaussian normalize).
VectorXd sphere_sample(int dim, Rng& rng);

struct TwoPointEstimate {
  VectorXd direction;  // unit vector e
  double radius = 0.0;
  VectorXd estimate;
};

// (n / 2r) (f~(x + r e, xi) - f~(x - r e, xi)) e with a shared xi;
// two zeroth-order calls.
TwoPointEstimate two_point_estimate(OracleSuite& suite, const VectorXd& x,
                                    double radius, Rng& rng);
// Test hook: same estimator with the direction forced.
TwoPointEstimate two_point_estimate_with_direction(OracleSuite& suite,
                                                   const VectorXd& x,
                                                   double radius,
                                                   const VectorXd& direction,
                                                   Rng& rng);

// Central differences over the standard basis, (1/2r) sum_i (f~(x + r h_i)
// - f~(x - r h_i)) h_i; 2n zeroth-order calls. The plain forward/backward
// pair uses one shared xi per coordinate.
VectorXd full_finite_diff(OracleSuite& suite, const VectorXd& x, double radius,
                          Rng& rng);

// Monte-Carlo estimate of the sphere-smoothed surrogate E_e[f(x + r e)];
// test-only machinery.
double smoothed_value_mc(OracleSuite& suite, const VectorXd& x, double radius,
                         int samples, Rng& rng);

}  // namespace decopt::oracle

#endif
