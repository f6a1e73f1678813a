// Acceptance suite: one pass/fail line per criterion. Exit code 0 only if
// every criterion passes. Run with an integer argument to execute a single
// criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "decopt/consensus.hpp"
#include "decopt/dual_algos.hpp"
#include "decopt/harness.hpp"
#include "decopt/kernels.hpp"
#include "decopt/netgraph.hpp"
#include "decopt/oracle.hpp"
#include "decopt/primal_algos.hpp"
#include "decopt/problems.hpp"
#include "decopt/sliding.hpp"

namespace graph = decopt::graph;
namespace consensus = decopt::consensus;
namespace oracle = decopt::oracle;
namespace problems = decopt::problems;
namespace primal = decopt::primal;
namespace sliding = decopt::sliding;
namespace dual = decopt::dual;
namespace harness = decopt::harness;
namespace kernels = decopt::kernels;
using decopt::Rng;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " FAILED{" << what << "}";
    }
  }
};

consensus::NodeState random_state(int m, int n, std::uint64_t seed) {
  Rng rng(seed);
  consensus::NodeState state(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) state(i, j) = rng.normal();
  return state;
}

double linear_slope(const std::vector<double>& xs,
                    const std::vector<double>& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = (double)xs.size();
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// -------------------------------------------------------------------------
// 1. consensus contraction on P5, C6, K5: per-step ratio <= lambda2 + 1e-10
Outcome criterion_consensus_contraction() {
  Outcome out;
  struct Case {
    graph::Family family;
    int m;
  };
  for (const Case c : {Case{graph::Family::path, 5},
                       Case{graph::Family::cycle, 6},
                       Case{graph::Family::complete, 5}}) {
    const auto g = graph::generate_graph(c.family, c.m);
    const auto mix = graph::metropolis_mixing(g);
    const double lambda2 =
        graph::spectral_summary(mix, graph::MatrixKind::mixing).lambda2_mix;
    consensus::MixingSource source(mix);
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto x0 = random_state(c.m, 4, seed);
      const auto [x, report] = consensus::run_consensus(source, x0, 100);
      // ratios are only meaningful while the error sits well above the
      // roundoff floor (absolute noise ~1e-16 * state scale); K5 averages
      // exactly in one step and C6 reaches ~1e-18 within the window
      const double initial = consensus::consensus_error(x0);
      const double floor = 1e-6 * initial;
      for (size_t k = 0; k < report.per_step_ratio.size(); ++k) {
        const double prev = k == 0 ? initial : report.per_step_error[k - 1];
        if (prev > floor)
          worst = std::max(worst, report.per_step_ratio[k] - lambda2);
      }
    }
    out.expect(worst <= 1e-10, graph::family_to_string(c.family) +
                                   " ratio excess " + std::to_string(worst));
    out.detail << " " << graph::family_to_string(c.family)
               << " max-excess=" << worst;
  }
  return out;
}

// -------------------------------------------------------------------------
// 2. accelerated vs plain consensus on P16 + chi-sweep slopes
Outcome criterion_accelerated_consensus() {
  Outcome out;
  const auto p16 = graph::generate_graph(graph::Family::path, 16);
  const auto lap = graph::build_laplacian(p16);
  const double chi =
      graph::spectral_summary(lap, graph::MatrixKind::laplacian).chi;
  const auto x0 = random_state(16, 4, 3);
  consensus::MixingSource plain(graph::laplacian_mixing(lap));
  const int plain_rounds =
      consensus::rounds_to_relative_error(plain, x0, 1e-8, 200000);
  const int accel_rounds = consensus::accelerated_rounds_to_relative_error(
      lap, x0, 1e-8, 200000);
  out.expect(plain_rounds > 0 && accel_rounds > 0, "rounds not reached");
  const double ratio = (double)accel_rounds / plain_rounds;
  const double bound = 1.5 * 2.0 / std::sqrt(chi);
  out.expect(ratio <= bound, "round ratio " + std::to_string(ratio) + " > " +
                                 std::to_string(bound));
  out.detail << " chi=" << chi << " plain=" << plain_rounds
             << " accel=" << accel_rounds << " ratio=" << ratio
             << " bound=" << bound;

  // harness chi-sweep slope check (tolerance 0.3)
  harness::ExperimentConfig cfg;
  cfg.seed = 5;
  cfg.problem.m = 4;
  cfg.problem.n = 4;
  cfg.graph.family = "path";
  cfg.graph.m = 4;
  cfg.algorithm.id = "consensus";
  cfg.algorithm.budget = 200000;
  cfg.target_eps = 1e-8;
  const auto plain_report = harness::sweep(cfg, "chi", {4, 8, 16}, 1);
  cfg.algorithm.id = "accelerated_consensus";
  const auto accel_report = harness::sweep(cfg, "chi", {4, 8, 16}, 1);
  out.expect(plain_report.complete && accel_report.complete,
             "sweep incomplete");
  out.expect(std::abs(plain_report.rounds_slope - 1.0) <= 0.3,
             "plain slope " + std::to_string(plain_report.rounds_slope));
  out.expect(std::abs(accel_report.rounds_slope - 0.5) <= 0.3,
             "accelerated slope " +
                 std::to_string(accel_report.rounds_slope));
  out.detail << " plain-slope=" << plain_report.rounds_slope
             << " accel-slope=" << accel_report.rounds_slope;
  return out;
}

problems::ProblemInstance heterogeneous_quadratic(int m, int n, double kappa,
                                                  std::uint64_t seed,
                                                  double spread) {
  const auto base = problems::make_quadratic(m, n, kappa, seed);
  std::vector<MatrixXd> hessians;
  std::vector<VectorXd> linears;
  for (const auto& node : base.nodes) {
    const auto* q = dynamic_cast<const problems::QuadraticNode*>(node.get());
    hessians.push_back(q->hessian());
    linears.push_back(spread * q->linear());
  }
  return problems::from_quadratic_data(hessians, linears);
}

// -------------------------------------------------------------------------
// 3. dgd plateau vs extra exactness on P5
Outcome criterion_dgd_vs_extra() {
  Outcome out;
  const auto problem = heterogeneous_quadratic(5, 4, 12.0, 35, 8.0);
  const auto reference = problems::solve_reference(problem, 1e-12);
  const auto consts = problems::compute_constants(problem);
  const auto g = graph::generate_graph(graph::Family::path, 5);
  const auto mixing = graph::metropolis_mixing(g);
  const auto start = random_state(5, 4, 36);

  const auto dgd_run = primal::dgd(problem, mixing, 1.0 / (2.0 * consts.l_l),
                                   start, 10000, reference.f_star);
  std::vector<double> tail(dgd_run.f_residual.end() - 2000,
                           dgd_run.f_residual.end());
  std::sort(tail.begin(), tail.end());
  const double plateau = tail[tail.size() / 2];
  out.expect(plateau >= 1e-4, "dgd plateau " + std::to_string(plateau));

  const auto extra_run = primal::extra(problem, mixing, 1.0 / consts.l_l,
                                       start, 10000, reference.f_star);
  out.expect(extra_run.f_residual.back() <= 1e-8,
             "extra residual " + std::to_string(extra_run.f_residual.back()));
  out.expect(extra_run.consensus_err.back() <= 1e-8, "extra consensus error");
  out.detail << " dgd-plateau=" << plateau
             << " extra-final=" << extra_run.f_residual.back();
  return out;
}

// -------------------------------------------------------------------------
// 4. gradient-tracking conservation over 500 iterations
Outcome criterion_tracking_conservation() {
  Outcome out;
  const auto problem = problems::make_quadratic(5, 4, 10.0, 41);
  const auto reference = problems::solve_reference(problem, 1e-12);
  const auto g = graph::generate_graph(graph::Family::path, 5);
  const auto mixing = graph::metropolis_mixing(g);
  const auto start = random_state(5, 4, 42);

  const double eta = primal::tune_acc_dngd_eta(problem, mixing, start);
  const auto acc = primal::acc_dngd(problem, mixing, eta, start, 500,
                                    reference.f_star);
  double worst_acc = 0.0;
  for (double gap : acc.tracking_residual) worst_acc = std::max(worst_acc, gap);
  out.expect(worst_acc <= 1e-9, "acc_dngd tracking " + std::to_string(worst_acc));

  const auto base = graph::generate_graph(graph::Family::cycle, 5);
  const auto seq = graph::generate_time_varying(base, 1200, 0.3, 3, 48);
  const consensus::MixingSource source(seq);
  const auto consts = problems::compute_constants(problem);
  const auto diging = primal::diging(problem, source,
                                     1.0 / (6.0 * consts.l_l), start, 500,
                                     reference.f_star);
  double worst_diging = 0.0;
  for (double gap : diging.tracking_residual)
    worst_diging = std::max(worst_diging, gap);
  out.expect(worst_diging <= 1e-9,
             "diging tracking " + std::to_string(worst_diging));
  out.detail << " acc_dngd-max=" << worst_acc
             << " diging-max=" << worst_diging;
  return out;
}

// -------------------------------------------------------------------------
// 5. diging over a certified time-varying sequence: linear convergence
Outcome criterion_diging_time_varying() {
  Outcome out;
  const auto problem = problems::make_quadratic(6, 3, 10.0, 50);
  const auto reference = problems::solve_reference(problem, 1e-12);
  const auto base = graph::generate_graph(graph::Family::cycle, 6);
  const auto seq = graph::generate_time_varying(base, 8000, 0.3, 3, 51);
  out.expect(graph::windows_connected(seq), "sequence certification");
  const consensus::MixingSource source(seq);
  const auto consts = problems::compute_constants(problem);
  const auto start = random_state(6, 3, 52);
  const auto record = primal::diging(problem, source,
                                     1.0 / (6.0 * consts.l_l), start, 4000,
                                     reference.f_star);
  const int hit = record.first_hit(1e-6);
  out.expect(hit > 0, "1e-6 not reached in budget");

  std::vector<double> xs, ys;
  for (size_t k = 0; k < record.f_residual.size(); ++k) {
    if (record.f_residual[k] <= 1e-14) break;
    xs.push_back((double)k);
    ys.push_back(std::log(record.f_residual[k]));
  }
  const double slope = linear_slope(xs, ys);
  out.expect(slope < -1e-3, "log-residual slope " + std::to_string(slope));
  out.detail << " hit=" << hit << " slope=" << slope;
  return out;
}

// -------------------------------------------------------------------------
// 6. dagd outer iterations scale like sqrt(kappa) (slope 0.5 +- 0.2)
Outcome criterion_dagd_kappa_scaling() {
  Outcome out;
  harness::ExperimentConfig cfg;
  cfg.seed = 5;
  cfg.problem.family = "quadratic";
  cfg.problem.m = 5;
  cfg.problem.n = 4;
  cfg.problem.seed = 1;
  cfg.graph.family = "path";
  cfg.graph.m = 5;
  cfg.graph.seed = 2;
  cfg.algorithm.id = "dagd_consensus";
  cfg.algorithm.budget = 3000;
  cfg.algorithm.consensus_t = 170;
  cfg.target_eps = 1e-6;
  const auto report = harness::sweep(cfg, "kappa", {10.0, 100.0, 1000.0}, 1);
  out.expect(report.complete, "sweep incomplete");
  out.expect(std::abs(report.oracle_slope - 0.5) <= 0.2,
             "outer-iteration slope " + std::to_string(report.oracle_slope));
  out.detail << " outer-slope=" << report.oracle_slope << " iters=[";
  for (const auto& p : report.points) out.detail << p.oracle_measure << " ";
  out.detail << "]";
  return out;
}

// -------------------------------------------------------------------------
// 7. sliding call separation on a penalized l1 instance
Outcome criterion_sliding_call_separation() {
  Outcome out;
  harness::ExperimentConfig cfg;
  cfg.seed = 9;
  cfg.problem.family = "l1_regression";
  cfg.problem.m = 5;
  cfg.problem.n = 2;
  cfg.problem.seed = 61;
  cfg.graph.family = "path";
  cfg.graph.m = 5;
  cfg.graph.seed = 62;
  cfg.algorithm.id = "sliding";
  cfg.algorithm.budget = 1000000;
  cfg.algorithm.penalty_eps = 0.1;  // fixed instance across the sweep
  cfg.algorithm.c_constant = 0.005;
  cfg.algorithm.box_radius = 1.0;
  cfg.target_eps = 1e-3;
  const auto report =
      harness::sweep(cfg, "eps", {1e-1, 1e-2, 1e-3}, 1);
  out.expect(report.complete, "sweep incomplete");
  // rounds_measure carries smooth calls, oracle_measure nonsmooth calls
  out.expect(std::abs(report.rounds_slope + 0.5) <= 0.35,
             "smooth slope " + std::to_string(report.rounds_slope));
  out.expect(std::abs(report.oracle_slope + 2.0) <= 0.35,
             "nonsmooth slope " + std::to_string(report.oracle_slope));
  out.detail << " smooth-slope=" << report.rounds_slope
             << " nonsmooth-slope=" << report.oracle_slope;
  return out;
}

// -------------------------------------------------------------------------
// 8. smoothing lemmas via Monte-Carlo on |x| and a logistic loss
Outcome criterion_smoothing_lemmas() {
  Outcome out;
  const int samples = 100000;

  // |x| in 1-d, Lipschitz constant 1
  {
    oracle::OracleSuite absf(
        1, [](const VectorXd& x) { return std::abs(x[0]); },
        [](const VectorXd& x) {
          VectorXd g(1);
          g[0] = x[0] > 0 ? 1.0 : (x[0] < 0 ? -1.0 : 0.0);
          return g;
        });
    Rng rng(200);
    const double radius = 0.5;
    double worst = -1e9;
    for (int point = 0; point < 20; ++point) {
      const double x0 = 3.0 * (rng.uniform() - 0.5);
      VectorXd x(1);
      x << x0;
      double acc = 0.0, acc2 = 0.0;
      for (int s = 0; s < samples; ++s) {
        const double e = rng.uniform() < 0.5 ? 1.0 : -1.0;
        const double v = std::abs(x0 + radius * e);
        acc += v;
        acc2 += v * v;
      }
      const double mean = acc / samples;
      const double var = std::max(0.0, acc2 / samples - mean * mean);
      const double stderr3 = 3.0 * std::sqrt(var / samples);
      const double excess = std::abs(mean - std::abs(x0)) - radius * 1.0;
      worst = std::max(worst, excess - stderr3);
    }
    out.expect(worst <= 0.0, "abs smoothing excess " + std::to_string(worst));
    out.detail << " abs-excess=" << worst;
  }

  // logistic in 5-d with injected bounded noise: bias bound n Delta p*/r
  {
    const int dim = 5;
    Rng wrng(201);
    const VectorXd w = wrng.gaussian_vector(dim);
    const double lips = w.norm();
    auto value = [w](const VectorXd& x) {
      const double t = -w.dot(x);
      return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
    };
    auto grad = [w](const VectorXd& x) {
      const double sig = 1.0 / (1.0 + std::exp(w.dot(x)));
      return VectorXd(-sig * w);
    };
    oracle::NoiseConfig clean;
    oracle::NoiseConfig noisy;
    noisy.delta_bound = 1e-3;
    oracle::OracleSuite f_clean(dim, value, grad, clean);
    oracle::OracleSuite f_noisy(dim, value, grad, noisy);

    Rng rng(202);
    const double radius = 0.05;
    double worst_value = -1e9;
    double worst_bias = -1e9;
    for (int point = 0; point < 20; ++point) {
      const VectorXd x = 0.5 * rng.gaussian_vector(dim);
      // |F - f| <= r M
      double acc = 0.0, acc2 = 0.0;
      Rng mc(203 + point);
      for (int s = 0; s < samples / 10; ++s) {
        const VectorXd e = oracle::sphere_sample(dim, mc);
        const double v = value(x + radius * e);
        acc += v;
        acc2 += v * v;
      }
      const int used = samples / 10;
      const double mean = acc / used;
      const double var = std::max(0.0, acc2 / used - mean * mean);
      worst_value = std::max(worst_value,
                             std::abs(mean - value(x)) - radius * lips -
                                 3.0 * std::sqrt(var / used));

      // coupled noisy/clean two-point draws isolate the bias term
      VectorXd bias_acc = VectorXd::Zero(dim);
      double bias_sq = 0.0;
      Rng draw(204 + point);
      for (int s = 0; s < samples; ++s) {
        const VectorXd e = oracle::sphere_sample(dim, draw);
        const std::uint64_t xi = draw.next_u64();
        const double noisy_plus = f_noisy.zeroth_value(x + radius * e, xi);
        const double noisy_minus = f_noisy.zeroth_value(x - radius * e, xi);
        const double clean_plus = f_clean.zeroth_value(x + radius * e, xi);
        const double clean_minus = f_clean.zeroth_value(x - radius * e, xi);
        const VectorXd diff = (dim / (2.0 * radius)) *
                              ((noisy_plus - noisy_minus) -
                               (clean_plus - clean_minus)) *
                              e;
        bias_acc += diff;
        bias_sq += diff.squaredNorm();
      }
      const VectorXd bias = bias_acc / samples;
      const double var_est =
          std::max(0.0, bias_sq / samples - bias.squaredNorm());
      const double stderr3 = 3.0 * std::sqrt(var_est / samples);
      const double bound = dim * noisy.delta_bound / radius;  // p* = 1
      worst_bias = std::max(worst_bias, bias.norm() - bound - stderr3);
    }
    out.expect(worst_value <= 0.0,
               "logistic |F-f| excess " + std::to_string(worst_value));
    out.expect(worst_bias <= 0.0,
               "bias bound excess " + std::to_string(worst_bias));
    out.detail << " logistic-excess=" << worst_value
               << " bias-excess=" << worst_bias;
  }
  return out;
}

// -------------------------------------------------------------------------
// 9. zoSA feasibility + M-zoSA geometric decay on the simplex
Outcome criterion_zosa_mzosa() {
  Outcome out;
  const int dim = 8;
  Rng setup(210);

  // strongly convex composite on the simplex: quadratic pull toward an
  // interior point plus a small l1 term handled by the zeroth-order oracle
  VectorXd center = setup.gaussian_vector(dim).cwiseAbs();
  center = (center.array() + 0.5).matrix();
  center /= center.sum();
  MatrixXd hess = MatrixXd::Identity(dim, dim);
  sliding::SmoothPart smooth;
  smooth.lipschitz = 1.0;
  smooth.grad = [hess, center](const VectorXd& x, std::uint64_t&) {
    return VectorXd(hess * (x - center));
  };
  smooth.value = [hess, center](const VectorXd& x) {
    return 0.5 * (x - center).dot(hess * (x - center));
  };
  const double weight = 0.05;
  const VectorXd pull = VectorXd::Constant(dim, 1.0 / dim);
  auto f_value = [weight, pull](const VectorXd& x) {
    return weight * (x - pull).cwiseAbs().sum();
  };
  auto f_grad = [weight, pull](const VectorXd& x) {
    VectorXd g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double d = x[i] - pull[i];
      g[i] = d > 0 ? weight : (d < 0 ? -weight : 0.0);
    }
    return g;
  };

  // reference composite optimum by long projected subgradient descent
  VectorXd ref = center;
  double best = smooth.value(ref) + f_value(ref);
  VectorXd cur = ref;
  for (long k = 1; k <= 400000; ++k) {
    std::uint64_t dummy = 0;
    const VectorXd g = smooth.grad(cur, dummy) + f_grad(cur);
    cur = problems::project_simplex(cur - (0.5 / std::sqrt((double)k)) * g);
    const double val = smooth.value(cur) + f_value(cur);
    if (val < best) {
      best = val;
      ref = cur;
    }
  }
  const double psi_star = best;

  const auto geom = sliding::Geometry::entropy_simplex(dim);
  const double mu_eff = 1.0 / (2.0 * dim);
  const double radius = 1e-3;
  const VectorXd start = VectorXd::Constant(dim, 1.0 / dim);

  oracle::OracleSuite fzo(dim, f_value, f_grad);  // Delta = 0
  const double rho0 =
      smooth.value(start) + f_value(start) - psi_star + 1e-6;

  const int phases = 4;
  const int seeds = 20;
  std::vector<double> mean_gap(phases, 0.0);
  bool feasible = true;
  for (int seed = 0; seed < seeds; ++seed) {
    Rng rng(1000 + seed);
    const auto record = sliding::m_zo_sliding(
        smooth, fzo, geom, start, mu_eff, rho0, phases, radius, weight, rng,
        2.0, 100000, true);
    for (int i = 0; i < phases; ++i) {
      const VectorXd& y = record.phase_points[i];
      mean_gap[i] += (smooth.value(y) + f_value(y) - psi_star) / seeds;
    }
    for (const auto& point : record.outer_points) {
      if (point.minCoeff() < -1e-12 || std::abs(point.sum() - 1.0) > 1e-12)
        feasible = false;
    }
  }
  out.expect(feasible, "simplex feasibility violated");
  for (int i = 0; i < phases; ++i) {
    const double bound = 3.0 * rho0 / std::pow(2.0, i + 1);
    out.expect(mean_gap[i] <= bound,
               "phase " + std::to_string(i + 1) + " gap " +
                   std::to_string(mean_gap[i]) + " > " +
                   std::to_string(bound));
    out.detail << " phase" << (i + 1) << "=" << mean_gap[i] << "/"
               << bound;
  }
  return out;
}

// -------------------------------------------------------------------------
// 10. dual correctness: gradient identity, confinement, certificate
Outcome criterion_dual_correctness() {
  Outcome out;
  const auto problem = problems::make_quadratic(4, 3, 6.0, 91);
  const auto lap =
      graph::build_laplacian(graph::generate_graph(graph::Family::path, 4));
  const dual::DualProblem dp(problem, lap);
  const auto reference = problems::solve_reference(problem, 1e-12);
  const double f_star_stacked = 4 * reference.f_star;
  const auto dual_ref = dual::solve_dual_reference(dp);

  // Demyanov-Danskin agreement at random points
  Rng rng(92);
  double worst_dd = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const VectorXd y = rng.gaussian_vector(dp.lifted_dim());
    const VectorXd grad = dp.grad_psi_raw(y);
    const double h = 1e-6;
    for (int c = 0; c < dp.lifted_dim(); ++c) {
      VectorXd yp = y, ym = y;
      yp[c] += h;
      ym[c] -= h;
      const double fd = (dp.psi_raw(yp) - dp.psi_raw(ym)) / (2 * h);
      worst_dd = std::max(worst_dd, std::abs(fd - grad[c]) /
                                        std::max(1.0, std::abs(grad[c])));
    }
  }
  out.expect(worst_dd <= 1e-5, "finite-difference gap " +
                                   std::to_string(worst_dd));

  // subspace confinement for the three dual methods
  Rng rng2(93);
  const auto spdstm_run = dual::spdstm(dp, 200, dual::BatchSchedule{}, rng2);
  const auto sstm_run = dual::sstm_sc(dp, 100, dual::BatchSchedule{}, rng2);
  const double lam =
      dp.smooth_l_psi() * std::pow(std::log(64.0), 2.0) / (64.0 * 64.0);
  const VectorXd rrma_point = dual::rrma_ac_sa2(
      [&](const VectorXd& y) { return dp.grad_psi_raw(y); },
      dp.smooth_l_psi(), lam, VectorXd::Zero(dp.lifted_dim()), 64);
  out.expect(dp.kernel_component_norm(spdstm_run.dual_point) <= 1e-9,
             "spdstm confinement");
  out.expect(dp.kernel_component_norm(sstm_run.dual_point) <= 1e-9,
             "sstm confinement");
  out.expect(dp.kernel_component_norm(rrma_point) <= 1e-9,
             "rrma confinement");

  // certificate at the dual optimum and the key restart inequality
  const auto cert = dual::theorem3_certificate(
      dp, dual_ref.y_star, 1e-6, std::max(dual_ref.r_y, 1e-9),
      f_star_stacked);
  out.expect(cert.hypothesis && cert.conclusion, "certificate at optimum");

  double worst_key = -1e9;
  for (int trial = 0; trial < 20; ++trial) {
    const VectorXd y = rng.gaussian_vector(dp.lifted_dim());
    const VectorXd z = dp.apply_sqrt_w_raw(y);
    MatrixXd rows(4, 3);
    for (int i = 0; i < 4; ++i) rows.row(i) = z.segment(3 * i, 3).transpose();
    const MatrixXd xr = problem.conjugate_argmax_rows(rows);
    VectorXd x(12);
    for (int i = 0; i < 4; ++i) x.segment(3 * i, 3) = xr.row(i).transpose();
    const double lhs = dp.f_stacked(x) - f_star_stacked;
    const double rhs = dp.grad_psi_raw(y).dot(y);
    worst_key = std::max(worst_key, lhs - rhs);
  }
  out.expect(worst_key <= 1e-9, "key inequality excess " +
                                    std::to_string(worst_key));
  out.detail << " dd=" << worst_dd << " key-excess=" << worst_key;
  return out;
}

// -------------------------------------------------------------------------
// 11. end-to-end dual pipeline on K3 and P5
Outcome criterion_dual_pipeline() {
  Outcome out;
  for (auto family : {graph::Family::complete, graph::Family::path}) {
    const int m = family == graph::Family::complete ? 3 : 5;
    const std::string tag = graph::family_to_string(family);
    const auto problem = problems::make_quadratic(m, 3, 6.0, 98);
    const auto lap = graph::build_laplacian(graph::generate_graph(family, m));
    const dual::DualProblem dp(problem, lap);
    const auto reference = problems::solve_reference(problem, 1e-12);
    const auto dual_ref = dual::solve_dual_reference(dp);
    const double ax_bound = 1e-6 / std::max(dual_ref.r_y, 1e-9);
    VectorXd x_ref(m * 3);
    for (int i = 0; i < m; ++i)
      x_ref.segment(3 * i, 3) = reference.x_star;

    Rng rng(99);
    const auto spdstm_run =
        dual::spdstm(dp, 60000, dual::BatchSchedule{}, rng);
    out.expect((spdstm_run.primal_point - x_ref).norm() <= 1e-4,
               tag + ": spdstm primal error " +
                   std::to_string((spdstm_run.primal_point - x_ref).norm()));
    out.expect(spdstm_run.gap.back() <= 1e-6,
               tag + ": spdstm gap " + std::to_string(spdstm_run.gap.back()));
    out.expect(spdstm_run.ax_norm.back() <= ax_bound,
               tag + ": spdstm ax " +
                   std::to_string(spdstm_run.ax_norm.back()));

    Rng rng2(100);
    const auto sstm_run = dual::sstm_sc(dp, 600, dual::BatchSchedule{}, rng2);
    out.expect((sstm_run.primal_point - x_ref).norm() <= 1e-4,
               tag + ": sstm primal error");
    out.expect(sstm_run.gap.back() <= 1e-6, tag + ": sstm gap");
    out.expect(sstm_run.ax_norm.back() <= ax_bound, tag + ": sstm ax");

    // lifted and direct trajectories agree
    Rng rng3(101), rng4(101);
    const auto direct = dual::spdstm(dp, 400, dual::BatchSchedule{}, rng3,
                                     dual::LiftMode::direct);
    const auto lifted = dual::spdstm(dp, 400, dual::BatchSchedule{}, rng4,
                                     dual::LiftMode::lifted);
    const double lift_gap =
        (direct.primal_point - lifted.primal_point).cwiseAbs().maxCoeff();
    out.expect(lift_gap <= 1e-10, tag + ": lift gap " +
                                      std::to_string(lift_gap));
    out.detail << " " << tag << "{gap=" << spdstm_run.gap.back()
               << " ax=" << spdstm_run.ax_norm.back()
               << " lift=" << lift_gap << "}";
  }
  return out;
}

// -------------------------------------------------------------------------
// 12. restart machinery halves the gradient norm each phase
Outcome criterion_restart_machinery() {
  Outcome out;
  const auto problem = problems::make_quadratic(4, 3, 6.0, 111);
  const auto lap =
      graph::build_laplacian(graph::generate_graph(graph::Family::path, 4));
  const dual::DualProblem dp(problem, lap);
  const auto dual_ref = dual::solve_dual_reference(dp);

  dual::RestartedParams params;
  params.eps = 1e-6;
  params.r_y = std::max(dual_ref.r_y, 1e-6);
  Rng rng(112);
  const auto result = dual::restarted_rrma(dp, params, rng);
  out.expect(result.phases_run >= 1, "no phases run");
  bool halves = true;
  for (size_t k = 1; k < result.phase_grad_norms.size(); ++k)
    if (result.phase_grad_norms[k] >
        0.5 * result.phase_grad_norms[k - 1] + 1e-14)
      halves = false;
  out.expect(halves, "phase halving violated");
  const double final_norm = dp.grad_psi_raw(result.point).norm();
  out.expect(final_norm <= params.eps / params.r_y,
             "final gradient norm " + std::to_string(final_norm));
  out.detail << " phases=" << result.phases_run
             << " final-norm=" << final_norm
             << " target=" << params.eps / params.r_y;
  return out;
}

// -------------------------------------------------------------------------
// 13. reproducibility and communication audit on the golden configs
Outcome criterion_reproducibility() {
  Outcome out;
  const std::string dir = CONFIG_DIR;
  for (const char* name :
       {"extra_quadratic.json", "diging_timevarying.json",
        "spdstm_lifted_k3.json"}) {
    auto cfg = harness::ExperimentConfig::from_file(dir + "/" + name);
    const auto one = harness::run_experiment(cfg, "");
    const auto two = harness::run_experiment(cfg, "");
    out.expect(one.trace_csv == two.trace_csv,
               std::string(name) + ": traces differ");
    out.expect(!one.trace_csv.empty(), std::string(name) + ": empty trace");

    kernels::reset_mixing_audit();
    const auto audited = harness::run_experiment(cfg, "");
    out.expect(audited.total_comm_rounds == kernels::mixing_audit_count(),
               std::string(name) + ": audit mismatch (summary " +
                   std::to_string(audited.total_comm_rounds) + " vs kernel " +
                   std::to_string(kernels::mixing_audit_count()) + ")");
    out.detail << " " << name << "=" << audited.total_comm_rounds << "rds";
  }
  return out;
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {"consensus-contraction", criterion_consensus_contraction},
      {"accelerated-consensus", criterion_accelerated_consensus},
      {"dgd-vs-extra", criterion_dgd_vs_extra},
      {"tracking-conservation", criterion_tracking_conservation},
      {"diging-time-varying", criterion_diging_time_varying},
      {"dagd-kappa-scaling", criterion_dagd_kappa_scaling},
      {"sliding-call-separation", criterion_sliding_call_separation},
      {"smoothing-lemmas", criterion_smoothing_lemmas},
      {"zosa-mzosa-simplex", criterion_zosa_mzosa},
      {"dual-correctness", criterion_dual_correctness},
      {"dual-pipeline", criterion_dual_pipeline},
      {"restart-machinery", criterion_restart_machinery},
      {"reproducibility-audit", criterion_reproducibility},
  };

  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);

  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    if (only > 0 && (int)(i + 1) != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i].run();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail << " exception{" << e.what() << "}";
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("[%s] %02zu %s (%.1fs)%s\n", outcome.pass ? "PASS" : "FAIL",
                i + 1, criteria[i].name, secs, outcome.detail.str().c_str());
    std::fflush(stdout);
    if (!outcome.pass) ++failures;
  }
  if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
