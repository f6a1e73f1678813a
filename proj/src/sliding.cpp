#include "decopt/sliding.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "decopt/kernels.hpp"
#include "decopt/netgraph.hpp"

namespace decopt::sliding {

Geometry Geometry::euclidean(problems::Domain domain, int dim,
                             double radius_bound) {
  Geometry g;
  g.kind_ = GeometryKind::euclidean;
  g.domain_ = domain;
  g.dim_ = dim;
  g.radius_bound_ = radius_bound;
  g.p_star_ = 1.0;
  return g;
}

Geometry Geometry::entropy_simplex(int dim) {
  if (dim < 2)
    throw std::invalid_argument("entropy_simplex: dim >= 2");
  Geometry g;
  g.kind_ = GeometryKind::entropy_simplex;
  g.domain_.kind = problems::DomainKind::simplex;
  g.dim_ = dim;
  // p* bounds (E ||e||_inf^4)^(1/4) for e uniform on the sphere; estimated
  // once by a seeded Monte-Carlo draw since the paper only gives the order.
  Rng rng(0x5eedu + (std::uint64_t)dim);
  double acc = 0.0;
  const int samples = 2000;
  for (int s = 0; s < samples; ++s) {
    const VectorXd e = oracle::sphere_sample(dim, rng);
    const double h = e.cwiseAbs().maxCoeff();
    acc += h * h * h * h;
  }
  g.p_star_ = std::pow(acc / samples, 0.25);
  return g;
}

double Geometry::divergence(const VectorXd& from, const VectorXd& to) const {
  if (kind_ == GeometryKind::euclidean) return 0.5 * (to - from).squaredNorm();
  // KL(to || from)
  double acc = 0.0;
  for (Eigen::Index i = 0; i < to.size(); ++i) {
    const double t = std::max(to[i], 0.0);
    if (t <= 0.0) continue;
    acc += t * std::log(t / std::max(from[i], 1e-300));
  }
  return acc;
}

VectorXd Geometry::project(const VectorXd& x) const { return domain_.project(x); }

VectorXd Geometry::center() const { return domain_.center(dim_); }

VectorXd Geometry::prox_step(const VectorXd& anchor, const VectorXd& prev,
                             const VectorXd& lin, double beta,
                             double pt) const {
  if (beta <= 0.0 || pt < 0.0)
    throw std::invalid_argument("prox_step: beta > 0, pt >= 0");
  if (kind_ == GeometryKind::euclidean) {
    const VectorXd raw =
        (beta * anchor + beta * pt * prev - lin) / (beta * (1.0 + pt));
    return domain_.project(raw);
  }
  // entropy prox: u_i ~ exp[(log a_i + pt log p_i - lin_i / beta)/(1 + pt)]
  VectorXd logs(dim_);
  for (int i = 0; i < dim_; ++i) {
    const double la = std::log(std::max(anchor[i], 1e-300));
    const double lp = std::log(std::max(prev[i], 1e-300));
    logs[i] = (la + pt * lp - lin[i] / beta) / (1.0 + pt);
  }
  const double shift = logs.maxCoeff();
  VectorXd u = (logs.array() - shift).exp().matrix();
  const double total = u.sum();
  return u / total;
}

double Geometry::diameter() const {
  if (kind_ == GeometryKind::entropy_simplex) return 2.0;  // l1 diameter
  if (domain_.kind == problems::DomainKind::all_space) return radius_bound_;
  return domain_.diameter_l2(dim_);
}

double Geometry::diameter_v() const {
  if (kind_ == GeometryKind::entropy_simplex)
    return std::sqrt(2.0 * std::log((double)dim_));
  return diameter();
}

double Geometry::p_star() const { return p_star_; }

long SlidingSchedule::inner_t(int k) const {
  const double raw = c_constant * outer_budget * second_moment *
                     (double)k * (double)k /
                     (d_tilde * smooth_l * smooth_l);
  if (!std::isfinite(raw)) return inner_cap;
  const long t = (long)std::ceil(raw);
  return std::min(std::max(t, 1L), inner_cap);
}

double default_penalty_radius(double lipschitz_m, int node_count,
                              double lambda_min_plus) {
  return std::sqrt(lipschitz_m * lipschitz_m /
                   (node_count * lambda_min_plus));
}

PenaltyProblem make_penalty(const problems::ProblemInstance& problem,
                            const MatrixXd& laplacian, double r_y,
                            double eps) {
  if (eps <= 0.0) throw std::invalid_argument("make_penalty: eps > 0");
  PenaltyProblem pen;
  pen.base = &problem;
  pen.laplacian = laplacian;
  const auto spec =
      graph::spectral_summary(laplacian, graph::MatrixKind::laplacian);
  pen.lambda_max = spec.lambda_max;
  pen.lambda_min_plus = spec.lambda_min_plus;
  pen.r_y = r_y;
  pen.coeff = r_y * r_y / eps;
  pen.smooth_l = 2.0 * pen.coeff * pen.lambda_max;
  return pen;
}

double PenaltyProblem::h_value(const VectorXd& stacked,
                               std::uint64_t& rounds) const {
  const int m = base->node_count;
  const int n = base->dim;
  const Eigen::Map<const MatrixXd> state(stacked.data(), n, m);
  // state columns are node blocks; W acts on the node index
  MatrixXd mixed;
  kernels::mix_apply(laplacian, state.transpose(), mixed, rounds);
  return coeff * (state.transpose().cwiseProduct(mixed)).sum();
}

double PenaltyProblem::h_value_raw(const VectorXd& stacked) const {
  const int m = base->node_count;
  const int n = base->dim;
  const Eigen::Map<const MatrixXd> state(stacked.data(), n, m);
  MatrixXd mixed;
  kernels::mix_apply_raw(laplacian, state.transpose(), mixed);
  return coeff * (state.transpose().cwiseProduct(mixed)).sum();
}

VectorXd PenaltyProblem::h_gradient(const VectorXd& stacked,
                                    std::uint64_t& rounds) const {
  const int m = base->node_count;
  const int n = base->dim;
  const Eigen::Map<const MatrixXd> state(stacked.data(), n, m);
  MatrixXd mixed;
  kernels::mix_apply(laplacian, state.transpose(), mixed, rounds);
  MatrixXd grad_t = (2.0 * coeff) * mixed.transpose();  // n x m
  return Eigen::Map<VectorXd>(grad_t.data(), (Eigen::Index)m * n);
}

SmoothPart PenaltyProblem::smooth_part() const {
  SmoothPart part;
  part.lipschitz = smooth_l;
  part.grad = [this](const VectorXd& x, std::uint64_t& rounds) {
    return h_gradient(x, rounds);
  };
  part.value = [this](const VectorXd& x) { return h_value_raw(x); };
  return part;
}

NonsmoothPart PenaltyProblem::nonsmooth_part() const {
  NonsmoothPart part;
  part.bound_m = base->lipschitz_m * std::sqrt((double)base->node_count);
  part.subgrad = [this](const VectorXd& x) {
    return base->stacked_gradient_flat(x);
  };
  part.value = [this](const VectorXd& x) { return base->stacked_value_flat(x); };
  return part;
}

namespace {

using SubgradFn = std::function<VectorXd(const VectorXd&)>;

// Shared outer/inner skeleton of the sliding family. estimator(u) returns
// the (sub)gradient surrogate of the nonsmooth part used in the inner loop.
SlidingRecord run_sliding_core(const SmoothPart& smooth,
                               const std::function<double(const VectorXd&)>& f_value,
                               const SubgradFn& estimator,
                               std::uint64_t* nonsmooth_counter,
                               std::uint64_t* zo_counter,
                               const Geometry& geometry, VectorXd start,
                               const SlidingSchedule& schedule,
                               SlidingRecord* append_to = nullptr) {
  SlidingRecord local;
  SlidingRecord& record = append_to ? *append_to : local;
  std::uint64_t rounds =
      record.comm_rounds.empty() ? 0 : record.comm_rounds.back();
  std::uint64_t smooth_calls =
      record.smooth_calls.empty() ? 0 : record.smooth_calls.back();

  VectorXd x = geometry.project(std::move(start));
  VectorXd x_bar = x;
  VectorXd under(x.size()), u(x.size()), u_tilde(x.size());

  for (int k = 1; k <= schedule.outer_budget; ++k) {
    const double gamma = schedule.gamma_k(k);
    const double beta = schedule.beta_k(k);
    under = (1.0 - gamma) * x_bar + gamma * x;
    const VectorXd smooth_grad = smooth.grad(under, rounds);
    ++smooth_calls;

    const long inner = schedule.inner_t(k);
    u = x;
    u_tilde = x;
    for (long t = 1; t <= inner; ++t) {
      const VectorXd lin = smooth_grad + estimator(u);
      u = geometry.prox_step(x, u, lin, beta, schedule.p_t(t));
      const double theta = schedule.theta_t(t);
      u_tilde = (1.0 - theta) * u_tilde + theta * u;
    }
    x = u;
    x_bar = (1.0 - gamma) * x_bar + gamma * u_tilde;

    if (!x_bar.allFinite() || x_bar.norm() > 1e12) {
      record.diverged = true;
      break;
    }
    double objective = smooth.value ? smooth.value(x_bar) : 0.0;
    if (f_value) objective += f_value(x_bar);
    if (schedule.keep_outer_points) {
      record.outer_points.push_back(x);
      record.outer_points.push_back(x_bar);
    }
    record.objective.push_back(objective);
    record.smooth_calls.push_back(smooth_calls);
    record.nonsmooth_calls.push_back(nonsmooth_counter ? *nonsmooth_counter : 0);
    record.zo_calls.push_back(zo_counter ? *zo_counter : 0);
    record.comm_rounds.push_back(rounds);
  }
  record.final_point = x_bar;
  return record;
}

}  // namespace

SlidingRecord sliding(const SmoothPart& smooth, const NonsmoothPart& nonsmooth,
                      const Geometry& geometry, VectorXd start,
                      const SlidingSchedule& schedule) {
  std::uint64_t nonsmooth_calls = 0;
  auto estimator = [&](const VectorXd& u) {
    ++nonsmooth_calls;
    return nonsmooth.subgrad(u);
  };
  return run_sliding_core(smooth, nonsmooth.value, estimator,
                          &nonsmooth_calls, nullptr, geometry,
                          std::move(start), schedule);
}

SlidingRecord s_sliding(const SmoothPart& smooth,
                        const NonsmoothPart& nonsmooth,
                        const Geometry& geometry, VectorXd start,
                        const SlidingSchedule& schedule, Rng& rng) {
  std::uint64_t nonsmooth_calls = 0;
  auto estimator = [&](const VectorXd& u) {
    ++nonsmooth_calls;
    if (nonsmooth.stoch_subgrad) return nonsmooth.stoch_subgrad(u, rng);
    VectorXd g = nonsmooth.subgrad(u);
    if (nonsmooth.sigma > 0.0)
      g += (nonsmooth.sigma / std::sqrt((double)u.size())) *
           rng.gaussian_vector(u.size());
    return g;
  };
  return run_sliding_core(smooth, nonsmooth.value, estimator,
                          &nonsmooth_calls, nullptr, geometry,
                          std::move(start), schedule);
}

SlidingRecord rs_sliding(const SmoothPart& smooth,
                         const NonsmoothPart& nonsmooth,
                         const Geometry& geometry, VectorXd start, double mu,
                         double r0, int phases, Rng& rng, double c_constant,
                         long inner_cap) {
  if (mu <= 0.0) throw std::invalid_argument("rs_sliding: mu > 0");
  if (!std::isfinite(geometry.diameter()) || geometry.diameter() <= 0.0)
    throw std::invalid_argument("rs_sliding: bounded domain required");

  SlidingRecord record;
  std::uint64_t nonsmooth_calls = 0;
  VectorXd point = std::move(start);
  const int budget =
      std::max(1, (int)std::ceil(std::sqrt(48.0 * smooth.lipschitz / mu)));
  double radius_sq = r0 * r0;
  for (int phase = 0; phase < phases; ++phase) {
    SlidingSchedule schedule;
    schedule.smooth_l = smooth.lipschitz;
    schedule.second_moment =
        nonsmooth.bound_m * nonsmooth.bound_m + nonsmooth.sigma * nonsmooth.sigma;
    schedule.d_tilde = 0.75 * radius_sq;
    schedule.outer_budget = budget;
    schedule.c_constant = c_constant;
    schedule.inner_cap = inner_cap;

    auto estimator = [&](const VectorXd& u) {
      ++nonsmooth_calls;
      if (nonsmooth.stoch_subgrad) return nonsmooth.stoch_subgrad(u, rng);
      VectorXd g = nonsmooth.subgrad(u);
      if (nonsmooth.sigma > 0.0)
        g += (nonsmooth.sigma / std::sqrt((double)u.size())) *
             rng.gaussian_vector(u.size());
      return g;
    };
    run_sliding_core(smooth, nonsmooth.value, estimator, &nonsmooth_calls,
                     nullptr, geometry, point, schedule, &record);
    if (record.diverged) break;
    point = record.final_point;
    record.phase_points.push_back(point);
    radius_sq *= 0.5;
  }
  record.final_point = point;
  return record;
}

double zo_second_moment(const Geometry& geometry, double m_bound,
                        double delta_bound, double radius) {
  const double n = geometry.dim();
  const double p_star = geometry.p_star();
  return p_star * p_star *
         (n * m_bound * m_bound +
          n * n * delta_bound * delta_bound / (radius * radius));
}

SlidingRecord zo_sliding(const SmoothPart& smooth, oracle::OracleSuite& fzo,
                         const Geometry& geometry, VectorXd start,
                         const SlidingSchedule& schedule, double radius,
                         Rng& rng) {
  if (radius <= 0.0) throw std::invalid_argument("zo_sliding: radius > 0");
  if (!std::isfinite(geometry.diameter()) || geometry.diameter() <= 0.0)
    throw std::invalid_argument("zo_sliding: compact domain required");
  const VectorXd center = geometry.center();
  const double shrink = std::max(0.0, 1.0 - radius / geometry.diameter());
  const std::uint64_t zo_base = fzo.counters().zeroth_calls;
  std::uint64_t zo_calls = 0;

  auto estimator = [&](const VectorXd& u) {
    // evaluate on the shrunk set so u +- r e stays admissible
    const VectorXd probe = center + shrink * (u - center);
    const auto est = oracle::two_point_estimate(fzo, probe, radius, rng);
    zo_calls = fzo.counters().zeroth_calls - zo_base;
    return est.estimate;
  };
  auto f_value = [&fzo](const VectorXd& x) { return fzo.value_raw(x); };
  return run_sliding_core(smooth, f_value, estimator, nullptr, &zo_calls,
                          geometry, std::move(start), schedule);
}

SlidingRecord m_zo_sliding(const SmoothPart& smooth, oracle::OracleSuite& fzo,
                           const Geometry& geometry, VectorXd start, double mu,
                           double rho0, int phases, double radius,
                           double m_bound, Rng& rng, double c_constant,
                           long inner_cap, bool keep_outer_points) {
  if (mu <= 0.0 || rho0 <= 0.0)
    throw std::invalid_argument("m_zo_sliding: mu > 0 and rho0 > 0");
  if (!std::isfinite(geometry.diameter()) || geometry.diameter() <= 0.0)
    throw std::invalid_argument("m_zo_sliding: compact domain required");
  const int outer =
      2 * (int)std::ceil(std::sqrt(5.0 * smooth.lipschitz / mu));
  const double second_moment =
      zo_second_moment(geometry, m_bound, fzo.noise().delta_bound, radius);

  SlidingRecord record;
  VectorXd point = std::move(start);
  const VectorXd center = geometry.center();
  const double shrink = std::max(0.0, 1.0 - radius / geometry.diameter());
  const std::uint64_t zo_base = fzo.counters().zeroth_calls;
  std::uint64_t zo_calls = 0;
  auto f_value = [&fzo](const VectorXd& x) { return fzo.value_raw(x); };

  for (int phase = 1; phase <= phases; ++phase) {
    SlidingSchedule schedule;
    schedule.smooth_l = smooth.lipschitz;
    schedule.second_moment = second_moment;
    schedule.d_tilde = rho0 / (mu * std::pow(2.0, phase));
    schedule.outer_budget = outer;
    schedule.c_constant = c_constant;
    schedule.inner_cap = inner_cap;
    schedule.keep_outer_points = keep_outer_points;

    auto estimator = [&](const VectorXd& u) {
      const VectorXd probe = center + shrink * (u - center);
      const auto est = oracle::two_point_estimate(fzo, probe, radius, rng);
      zo_calls = fzo.counters().zeroth_calls - zo_base;
      return est.estimate;
    };
    run_sliding_core(smooth, f_value, estimator, nullptr, &zo_calls, geometry,
                     point, schedule, &record);
    if (record.diverged) break;
    point = record.final_point;
    record.phase_points.push_back(point);
  }
  record.final_point = point;
  return record;
}

}  // namespace decopt::sliding
