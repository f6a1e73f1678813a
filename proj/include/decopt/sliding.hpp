#ifndef DECOPT_SLIDING_HPP
#define DECOPT_SLIDING_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "decopt/oracle.hpp"
#include "decopt/problems.hpp"
#include "decopt/rng.hpp"

namespace decopt::sliding {

using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class GeometryKind { euclidean, entropy_simplex };

// Proximal setup: norm, Bregman divergence and the closed-form solve of
//   argmin_u  <lin, u> + beta V(anchor, u) + beta pt V(prev, u)  over Q.
// Euclidean uses half squared distance (box/ball/simplex domains via
// projection); the simplex setup uses the KL divergence with a
// multiplicative closed form.
class Geometry {
 public:
  static Geometry euclidean(problems::Domain domain, int dim,
                            double radius_bound = 0.0);
  static Geometry entropy_simplex(int dim);

  GeometryKind kind() const { return kind_; }
  int dim() const { return dim_; }
  const problems::Domain& domain() const { return domain_; }

  double divergence(const VectorXd& from, const VectorXd& to) const;
  VectorXd prox_step(const VectorXd& anchor, const VectorXd& prev,
                     const VectorXd& lin, double beta, double pt) const;
  VectorXd project(const VectorXd& x) const;
  VectorXd center() const;

  double diameter() const;    // D_Q in the geometry norm
  double diameter_v() const;  // D_{Q,V} = max sqrt(2 V) from the prox center
  double p_star() const;      // fourth-moment bound on ||e||_* for sphere e

 private:
  Geometry() = default;
  GeometryKind kind_ = GeometryKind::euclidean;
  problems::Domain domain_;
  int dim_ = 0;
  double radius_bound_ = 0.0;
  double p_star_ = 1.0;
};

// Outer/inner step-size rules. outer index k runs 1..outer_budget, inner
// index t runs 1..inner_t(k).
struct SlidingSchedule {
  double smooth_l = 1.0;
  double second_moment = 1.0;  // M^2-type bound entering the inner count
  double d_tilde = 1.0;
  int outer_budget = 1;
  double c_constant = 0.1;
  long inner_cap = 100000;
  bool keep_outer_points = false;

  double p_t(long t) const { return t / 2.0; }
  double theta_t(long t) const {
    return 2.0 * (t + 1.0) / (t * (t + 3.0));
  }
  double beta_k(int k) const { return 2.0 * smooth_l / k; }
  double gamma_k(int k) const { return 2.0 / (k + 1.0); }
  long inner_t(int k) const;
};

struct SmoothPart {
  std::function<VectorXd(const VectorXd&, std::uint64_t&)> grad;
  std::function<double(const VectorXd&)> value;
  double lipschitz = 0.0;
};

struct NonsmoothPart {
  std::function<VectorXd(const VectorXd&)> subgrad;
  std::function<VectorXd(const VectorXd&, Rng&)> stoch_subgrad;  // optional
  std::function<double(const VectorXd&)> value;
  double bound_m = 0.0;
  double sigma = 0.0;
};

struct SlidingRecord {
  std::vector<double> objective;  // composite value at the running average
  std::vector<std::uint64_t> smooth_calls;
  std::vector<std::uint64_t> nonsmooth_calls;
  std::vector<std::uint64_t> zo_calls;
  std::vector<std::uint64_t> comm_rounds;
  VectorXd final_point;
  std::vector<VectorXd> phase_points;
  std::vector<VectorXd> outer_points;  // x_k and running average per step
  bool diverged = false;

  std::uint64_t total_smooth() const {
    return smooth_calls.empty() ? 0 : smooth_calls.back();
  }
  std::uint64_t total_nonsmooth() const {
    return nonsmooth_calls.empty() ? 0 : nonsmooth_calls.back();
  }
  std::uint64_t total_zo() const {
    return zo_calls.empty() ? 0 : zo_calls.back();
  }
};

// Quadratic penalty reformulation of the consensus constraint: the smooth
// part is coeff * <x, W x> over stacked states, one communication round per
// gradient.
struct PenaltyProblem {
  const problems::ProblemInstance* base = nullptr;
  MatrixXd laplacian;  // small W-bar, m x m
  double coeff = 0.0;  // R_y^2 / eps
  double smooth_l = 0.0;
  double r_y = 0.0;
  double lambda_max = 0.0;
  double lambda_min_plus = 0.0;

  int total_dim() const { return base->node_count * base->dim; }
  double h_value(const VectorXd& stacked, std::uint64_t& rounds) const;
  double h_value_raw(const VectorXd& stacked) const;
  VectorXd h_gradient(const VectorXd& stacked, std::uint64_t& rounds) const;
  SmoothPart smooth_part() const;     // closures borrow this object
  NonsmoothPart nonsmooth_part() const;
};

double default_penalty_radius(double lipschitz_m, int node_count,
                              double lambda_min_plus);

PenaltyProblem make_penalty(const problems::ProblemInstance& problem,
                            const MatrixXd& laplacian, double r_y, double eps);

// Deterministic composite sliding (outer linearization of the smooth part,
// prox-sliding inner loop).
SlidingRecord sliding(const SmoothPart& smooth, const NonsmoothPart& nonsmooth,
                      const Geometry& geometry, VectorXd start,
                      const SlidingSchedule& schedule);

// Stochastic subgradients in the inner loop.
SlidingRecord s_sliding(const SmoothPart& smooth,
                        const NonsmoothPart& nonsmooth,
                        const Geometry& geometry, VectorXd start,
                        const SlidingSchedule& schedule, Rng& rng);

// Restarted stochastic sliding for strongly convex objectives: distance
// bound halves every phase, phase budgets follow the non-restarted
// complexity at the halved radius.
SlidingRecord rs_sliding(const SmoothPart& smooth,
                         const NonsmoothPart& nonsmooth,
                         const Geometry& geometry, VectorXd start, double mu,
                         double r0, int phases, Rng& rng,
                         double c_constant = 0.1, long inner_cap = 100000);

// p*^2 (n M^2 + n^2 Delta^2 / r^2): the second-moment bound of the
// two-point estimator that drives the inner-iteration counts.
double zo_second_moment(const Geometry& geometry, double m_bound,
                        double delta_bound, double radius);

// Zeroth-order sliding: two-point sphere estimates of the nonsmooth part
// inside the prox procedure, fresh (xi, e) per inner step.
SlidingRecord zo_sliding(const SmoothPart& smooth, oracle::OracleSuite& fzo,
                         const Geometry& geometry, VectorXd start,
                         const SlidingSchedule& schedule, double radius,
                         Rng& rng);

// Multi-phase zeroth-order sliding for strongly convex composites:
// phase i runs zo_sliding with d_tilde = rho0 / (mu 2^i).
SlidingRecord m_zo_sliding(const SmoothPart& smooth, oracle::OracleSuite& fzo,
                           const Geometry& geometry, VectorXd start, double mu,
                           double rho0, int phases, double radius,
                           double m_bound, Rng& rng, double c_constant = 0.1,
                           long inner_cap = 100000,
                           bool keep_outer_points = false);

}  // namespace decopt::sliding

#endif
