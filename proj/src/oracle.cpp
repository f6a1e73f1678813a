#include "decopt/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace decopt::oracle {

OracleSuite::OracleSuite(int dim, ValueFn value, GradFn grad_or_subgrad,
                         NoiseConfig noise)
    : dim_(dim),
      value_(std::move(value)),
      grad_(std::move(grad_or_subgrad)),
      noise_(noise) {
  if (dim_ < 1) throw std::invalid_argument("OracleSuite: dim >= 1");
  bias_direction_ = VectorXd::Constant(dim_, 1.0 / std::sqrt((double)dim_));
}

double OracleSuite::value(const VectorXd& x) {
  ++counters_.value_calls;
  return value_(x);
}

VectorXd OracleSuite::gradient(const VectorXd& x) {
  ++counters_.grad_calls;
  return grad_(x);
}

VectorXd OracleSuite::stochastic_gradient(const VectorXd& x, Rng& rng) {
  ++counters_.stoch_grad_calls;
  VectorXd g = grad_(x);
  if (noise_.grad_bias > 0.0) g += noise_.grad_bias * bias_direction_;
  if (noise_.grad_sigma > 0.0) {
    const double per_coord = noise_.grad_sigma / std::sqrt((double)dim_);
    g += per_coord * rng.gaussian_vector(dim_);
  }
  return g;
}

double OracleSuite::bounded_noise(const VectorXd& x) const {
  if (noise_.delta_bound == 0.0) return 0.0;
  const double s = std::sin(x.sum());
  return noise_.delta_bound * (s >= 0.0 ? 1.0 : -1.0);
}

double OracleSuite::zeroth_value(const VectorXd& x, std::uint64_t xi) {
  ++counters_.zeroth_calls;
  double v = value_(x);
  if (noise_.value_sigma > 0.0) {
    Rng noise_rng(xi);
    v += noise_.value_sigma * noise_rng.normal();
  }
  return v + bounded_noise(x);
}

VectorXd sphere_sample(int dim, Rng& rng) {
  if (dim < 1) throw std::invalid_argument("sphere_sample: dim >= 1");
  VectorXd v = rng.gaussian_vector(dim);
  double norm = v.norm();
  while (norm < 1e-12) {  // astronomically unlikely; redraw
    v = rng.gaussian_vector(dim);
    norm = v.norm();
  }
  return v / norm;
}

TwoPointEstimate two_point_estimate_with_direction(OracleSuite& suite,
                                                   const VectorXd& x,
                                                   double radius,
                                                   const VectorXd& direction,
                                                   Rng& rng) {
  if (radius <= 0.0) throw std::invalid_argument("two_point: radius > 0");
  const std::uint64_t xi = rng.next_u64();
  const double plus = suite.zeroth_value(x + radius * direction, xi);
  const double minus = suite.zeroth_value(x - radius * direction, xi);
  TwoPointEstimate est;
  est.direction = direction;
  est.radius = radius;
  est.estimate =
      (suite.dim() / (2.0 * radius)) * (plus - minus) * direction;
  return est;
}

TwoPointEstimate two_point_estimate(OracleSuite& suite, const VectorXd& x,
                                    double radius, Rng& rng) {
  const VectorXd e = sphere_sample(suite.dim(), rng);
  return two_point_estimate_with_direction(suite, x, radius, e, rng);
}

VectorXd full_finite_diff(OracleSuite& suite, const VectorXd& x, double radius,
                          Rng& rng) {
  if (radius <= 0.0) throw std::invalid_argument("full_finite_diff: radius > 0");
  const int n = suite.dim();
  VectorXd grad = VectorXd::Zero(n);
  VectorXd probe = x;
  for (int i = 0; i < n; ++i) {
    const std::uint64_t xi = rng.next_u64();
    probe[i] = x[i] + radius;
    const double plus = suite.zeroth_value(probe, xi);
    probe[i] = x[i] - radius;
    const double minus = suite.zeroth_value(probe, xi);
    probe[i] = x[i];
    grad[i] = (plus - minus) / (2.0 * radius);
  }
  return grad;
}

double smoothed_value_mc(OracleSuite& suite, const VectorXd& x, double radius,
                         int samples, Rng& rng) {
  if (samples < 1) throw std::invalid_argument("smoothed_value_mc: samples >= 1");
  double acc = 0.0;
  for (int s = 0; s < samples; ++s) {
    const VectorXd e = sphere_sample(suite.dim(), rng);
    acc += suite.value(x + radius * e);
  }
  return acc / samples;
}

}  // namespace decopt::oracle
