#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "decopt/oracle.hpp"

using namespace decopt;
using Eigen::VectorXd;
using oracle::NoiseConfig;
using oracle::OracleSuite;

namespace {

OracleSuite quadratic_suite(int dim, NoiseConfig noise = {}) {
  return OracleSuite(
      dim, [](const VectorXd& x) { return 0.5 * x.squaredNorm(); },
      [](const VectorXd& x) { return x; }, noise);
}

OracleSuite linear_suite(const VectorXd& c, NoiseConfig noise = {}) {
  return OracleSuite(
      (int)c.size(), [c](const VectorXd& x) { return c.dot(x); },
      [c](const VectorXd&) { return c; }, noise);
}

}  // namespace

TEST_CASE("sphere samples are unit and sign-symmetric in 1-d") {
  Rng rng(1);
  int positives = 0;
  for (int s = 0; s < 200; ++s) {
    const VectorXd e = oracle::sphere_sample(1, rng);
    CHECK(std::abs(std::abs(e[0]) - 1.0) <= 1e-12);
    if (e[0] > 0) ++positives;
  }
  CHECK(positives > 60);
  CHECK(positives < 140);

  for (int dim : {2, 5, 17}) {
    const VectorXd e = oracle::sphere_sample(dim, rng);
    CHECK(std::abs(e.norm() - 1.0) <= 1e-12);
  }
}

TEST_CASE("sphere sampling moments: zero mean, isotropic second moment") {
  const int dim = 5;
  const int samples = 100000;
  Rng rng(2);
  VectorXd mean = VectorXd::Zero(dim);
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(dim, dim);
  for (int s = 0; s < samples; ++s) {
    const VectorXd e = oracle::sphere_sample(dim, rng);
    mean += e;
    second += e * e.transpose();
  }
  mean /= samples;
  second /= samples;
  CHECK(mean.norm() <= 0.02);
  CHECK((second - Eigen::MatrixXd::Identity(dim, dim) / dim)
            .cwiseAbs()
            .maxCoeff() <= 0.02);
}

TEST_CASE("two-point estimate is exact on linear functions") {
  VectorXd c(2);
  c << 1.0, 0.0;
  auto suite = linear_suite(c);
  Rng rng(3);
  VectorXd e(2);
  e << 1.0, 0.0;
  const auto est = oracle::two_point_estimate_with_direction(
      suite, VectorXd::Zero(2), 0.1, e, rng);
  CHECK((est.estimate - VectorXd(2 * c)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(suite.counters().zeroth_calls == 2);

  // constant function -> zero estimate
  OracleSuite constant(
      3, [](const VectorXd&) { return 4.2; },
      [](const VectorXd&) { return VectorXd::Zero(3); });
  const auto zero_est =
      oracle::two_point_estimate(constant, VectorXd::Ones(3), 0.5, rng);
  CHECK(zero_est.estimate.cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(std::abs(zero_est.direction.norm() - 1.0) <= 1e-12);
}

TEST_CASE("two-point estimator mean approaches the smoothed gradient") {
  // f(x) = 0.5 ||x||^2 at x = (1,1): grad F(x) = x for the smoothed
  // surrogate of a quadratic (E[e] = 0, E[ee^T] = I/n keeps it exact)
  auto suite = quadratic_suite(2);
  Rng rng(4);
  VectorXd x(2);
  x << 1.0, 1.0;
  const double radius = 0.3;
  VectorXd acc = VectorXd::Zero(2);
  const int samples = 100000;
  for (int s = 0; s < samples; ++s)
    acc += oracle::two_point_estimate(suite, x, radius, rng).estimate;
  acc /= samples;
  CHECK((acc - x).norm() <= 0.02);
  CHECK(suite.counters().zeroth_calls == 2ull * samples);
}

TEST_CASE("full finite differences are exact on quadratics and linears") {
  auto quad = quadratic_suite(4);
  Rng rng(5);
  VectorXd x(4);
  x << 1.0, -2.0, 0.5, 3.0;
  const VectorXd grad = oracle::full_finite_diff(quad, x, 0.01, rng);
  CHECK((grad - x).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(quad.counters().zeroth_calls == 8);  // 2n

  VectorXd c(3);
  c << 0.3, -1.5, 2.0;
  auto lin = linear_suite(c);
  const VectorXd grad_lin =
      oracle::full_finite_diff(lin, VectorXd::Zero(3), 0.2, rng);
  CHECK((grad_lin - c).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("finite differences match an analytic logistic gradient") {
  const int dim = 4;
  VectorXd w(dim);
  w << 0.3, -0.7, 1.1, 0.2;
  auto value = [w](const VectorXd& x) {
    const double t = -w.dot(x);
    return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
  };
  auto grad = [w](const VectorXd& x) {
    const double sig = 1.0 / (1.0 + std::exp(w.dot(x)));
    return VectorXd(-sig * w);
  };
  OracleSuite suite(dim, value, grad);
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const VectorXd x = rng.gaussian_vector(dim);
    const VectorXd fd = oracle::full_finite_diff(suite, x, 1e-5, rng);
    CHECK((fd - grad(x)).cwiseAbs().maxCoeff() <= 1e-6);
  }
}

TEST_CASE("stochastic gradient reduces to the gradient at zero noise") {
  auto suite = quadratic_suite(3);
  Rng rng(7);
  const VectorXd x = rng.gaussian_vector(3);
  const VectorXd g = suite.stochastic_gradient(x, rng);
  CHECK((g - x).cwiseAbs().maxCoeff() == 0.0);
  CHECK(suite.counters().stoch_grad_calls == 1);
}

TEST_CASE("stochastic gradient bias and noise have the configured sizes") {
  NoiseConfig noise;
  noise.grad_sigma = 0.5;
  noise.grad_bias = 0.1;
  auto suite = quadratic_suite(4, noise);
  Rng rng(8);
  const VectorXd x = VectorXd::Ones(4);
  VectorXd mean = VectorXd::Zero(4);
  double var_acc = 0.0;
  const int samples = 50000;
  for (int s = 0; s < samples; ++s) {
    const VectorXd g = suite.stochastic_gradient(x, rng);
    mean += g;
    var_acc += (g - x).squaredNorm();
  }
  mean /= samples;
  CHECK(std::abs((mean - x).norm() - noise.grad_bias) <= 0.01);
  // E||g - grad||^2 = sigma^2 + bias^2
  const double second = var_acc / samples;
  CHECK(second == doctest::Approx(noise.grad_sigma * noise.grad_sigma +
                                  noise.grad_bias * noise.grad_bias)
                      .epsilon(0.05));
}

TEST_CASE("zeroth-order value noise is shared under a common xi") {
  NoiseConfig noise;
  noise.value_sigma = 1.0;
  auto suite = quadratic_suite(2, noise);
  VectorXd a = VectorXd::Zero(2);
  VectorXd b = VectorXd::Ones(2);
  const double va = suite.zeroth_value(a, 42);
  const double vb = suite.zeroth_value(b, 42);
  // shared realization cancels in the difference
  CHECK(vb - va == doctest::Approx(1.0).epsilon(1e-12));
  // different xi gives a different draw
  const double va2 = suite.zeroth_value(a, 43);
  CHECK(va != va2);
}

TEST_CASE("bounded adversarial noise respects its bound") {
  NoiseConfig noise;
  noise.delta_bound = 0.01;
  auto suite = quadratic_suite(3, noise);
  Rng rng(9);
  for (int s = 0; s < 100; ++s) {
    const VectorXd x = rng.gaussian_vector(3);
    CHECK(std::abs(suite.bounded_noise(x)) <= noise.delta_bound);
  }
}

TEST_CASE("smoothed value checks: linear, constant and |x|") {
  VectorXd c(3);
  c << 1.0, 2.0, -1.0;
  auto lin = linear_suite(c);
  Rng rng(10);
  const VectorXd x = VectorXd::Ones(3);
  const double smoothed = oracle::smoothed_value_mc(lin, x, 0.5, 40000, rng);
  // E[f(x + re)] = f(x) for linear f
  const double stderr_bound = 3.0 * 0.5 * c.norm() / std::sqrt(40000.0);
  CHECK(std::abs(smoothed - c.dot(x)) <= stderr_bound);

  OracleSuite constant(
      2, [](const VectorXd&) { return 2.5; },
      [](const VectorXd&) { return VectorXd::Zero(2); });
  CHECK(oracle::smoothed_value_mc(constant, VectorXd::Zero(2), 1.0, 100,
                                  rng) == doctest::Approx(2.5));

  // f(x) = |x| in 1-d at 0 with r = 1: F(0) = E|e| = 1 and |F - f| = rM
  OracleSuite absf(
      1, [](const VectorXd& x) { return std::abs(x[0]); },
      [](const VectorXd& x) {
        VectorXd g(1);
        g[0] = x[0] > 0 ? 1.0 : (x[0] < 0 ? -1.0 : 0.0);
        return g;
      });
  const double f0 =
      oracle::smoothed_value_mc(absf, VectorXd::Zero(1), 1.0, 1000, rng);
  CHECK(f0 == doctest::Approx(1.0));
}

TEST_CASE("finite-difference limit recovers the gradient") {
  auto suite = quadratic_suite(3);
  Rng rng(11);
  const VectorXd x = rng.gaussian_vector(3);
  const VectorXd fd = oracle::full_finite_diff(suite, x, 1e-7, rng);
  CHECK((fd - x).cwiseAbs().maxCoeff() <= 1e-5);
}

TEST_CASE("counter bookkeeping is exact") {
  auto suite = quadratic_suite(5);
  Rng rng(12);
  const VectorXd x = VectorXd::Ones(5);
  suite.value(x);
  suite.gradient(x);
  oracle::two_point_estimate(suite, x, 0.1, rng);
  oracle::full_finite_diff(suite, x, 0.1, rng);
  CHECK(suite.counters().value_calls == 1);
  CHECK(suite.counters().grad_calls == 1);
  CHECK(suite.counters().zeroth_calls == 2 + 10);
  suite.reset_counters();
  CHECK(suite.counters().zeroth_calls == 0);
}

TEST_CASE("two-point estimator second moment obeys the lemma bound") {
  // E ||est||^2 <= 2 p*^2 (c n M^2 + n^2 Delta^2 / r^2); Euclidean p* = 1,
  // fitted constant c <= 4
  const int dim = 6;
  Rng wrng(400);
  VectorXd w = wrng.gaussian_vector(dim);
  w /= w.norm();  // M = 1 for f(x) = <w, x>
  NoiseConfig noise;
  noise.delta_bound = 2e-3;
  OracleSuite suite(
      dim, [w](const VectorXd& x) { return w.dot(x); },
      [w](const VectorXd&) { return w; }, noise);
  Rng rng(401);
  const double radius = 0.05;
  const VectorXd x = VectorXd::Ones(dim);
  double acc = 0.0;
  const int samples = 50000;
  for (int s = 0; s < samples; ++s)
    acc += oracle::two_point_estimate(suite, x, radius, rng)
               .estimate.squaredNorm();
  const double second = acc / samples;
  const double c_fit = 4.0;
  const double bound =
      2.0 * (c_fit * dim * 1.0 +
             dim * dim * noise.delta_bound * noise.delta_bound /
                 (radius * radius));
  CHECK(second <= bound);
}
