#include "decopt/primal_algos.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "decopt/kernels.hpp"

namespace decopt::primal {

namespace {

constexpr double kDivergenceGuard = 1e10;

struct Tracer {
  const problems::ProblemInstance* problem;
  double f_star;
  RunRecord* record;
  std::uint64_t grads = 0;

  void snapshot(const NodeState& state, std::uint64_t rounds,
                double tracking = 0.0) {
    const Eigen::VectorXd mean_row =
        state.colwise().mean().transpose();
    record->f_residual.push_back(problem->average_value(mean_row) - f_star);
    record->consensus_err.push_back(consensus::consensus_error(state));
    record->grad_calls.push_back(grads);
    record->comm_rounds.push_back(rounds);
    record->tracking_residual.push_back(tracking);
  }

  bool diverged(const NodeState& state) {
    if (state.allFinite() && state.norm() < kDivergenceGuard) return false;
    record->diverged = true;
    record->note = "state norm exceeded divergence guard";
    return true;
  }
};

double row_sum_gap(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

int RunRecord::first_hit(double eps) const {
  for (size_t i = 0; i < f_residual.size(); ++i)
    if (f_residual[i] <= eps && consensus_err[i] <= eps)
      return static_cast<int>(i) + 1;
  return -1;
}

std::uint64_t RunRecord::rounds_at(int iteration) const {
  return comm_rounds.at(static_cast<size_t>(iteration) - 1);
}

std::uint64_t RunRecord::grads_at(int iteration) const {
  return grad_calls.at(static_cast<size_t>(iteration) - 1);
}

void write_record_csv(const RunRecord& record, std::ostream& os) {
  os << "schema_version,1\n";
  os << "iter,comm_rounds,grad_calls,f_residual,consensus_error\n";
  char buf[128];
  for (size_t i = 0; i < record.f_residual.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%llu,%llu,%.17g,%.17g", i + 1,
                  (unsigned long long)record.comm_rounds[i],
                  (unsigned long long)record.grad_calls[i],
                  record.f_residual[i], record.consensus_err[i]);
    os << buf << '\n';
  }
}

RunRecord dgd(const problems::ProblemInstance& problem,
              const Eigen::MatrixXd& mixing, double step, NodeState start,
              int budget, double f_star) {
  if (step <= 0.0) throw std::invalid_argument("dgd: step > 0");
  RunRecord record;
  Tracer tracer{&problem, f_star, &record};
  std::uint64_t rounds = 0;
  NodeState state = std::move(start);
  NodeState mixed;
  for (int k = 0; k < budget; ++k) {
    const NodeState grad = problem.stacked_gradient(state);
    ++tracer.grads;
    kernels::mix_apply(mixing, state, mixed, rounds);
    state = mixed - step * grad;
    if (tracer.diverged(state)) break;
    tracer.snapshot(state, rounds);
  }
  record.final_state = std::move(state);
  return record;
}

RunRecord extra(const problems::ProblemInstance& problem,
                const Eigen::MatrixXd& mixing, double step, NodeState start,
                int budget, double f_star) {
  if (step <= 0.0) throw std::invalid_argument("extra: step > 0");
  RunRecord record;
  Tracer tracer{&problem, f_star, &record};
  std::uint64_t rounds = 0;

  NodeState prev = std::move(start);
  NodeState grad_prev = problem.stacked_gradient(prev);
  ++tracer.grads;
  NodeState mix_prev;
  kernels::mix_apply(mixing, prev, mix_prev, rounds);
  NodeState cur = mix_prev - step * grad_prev;
  tracer.snapshot(cur, rounds);

  NodeState mix_cur;
  for (int k = 1; k < budget; ++k) {
    const NodeState grad_cur = problem.stacked_gradient(cur);
    ++tracer.grads;
    kernels::mix_apply(mixing, cur, mix_cur, rounds);
    NodeState next = cur + mix_cur - 0.5 * (mix_prev + prev) -
                     step * (grad_cur - grad_prev);
    // conservation: 1^T X^{k+2} = 1^T (M+I)/2 X^{k+1} - alpha 1^T grad
    const Eigen::RowVectorXd lhs = next.colwise().sum();
    const Eigen::RowVectorXd rhs =
        0.5 * (mix_cur.colwise().sum() + cur.colwise().sum()) -
        step * grad_cur.colwise().sum();
    prev = std::move(cur);
    cur = std::move(next);
    grad_prev = grad_cur;
    mix_prev = mix_cur;
    if (tracer.diverged(cur)) break;
    tracer.snapshot(cur, rounds, row_sum_gap(lhs, rhs));
  }
  record.final_state = std::move(cur);
  return record;
}

RunRecord acc_dngd(const problems::ProblemInstance& problem,
                   const Eigen::MatrixXd& mixing, double eta, NodeState start,
                   int budget, double f_star) {
  if (eta <= 0.0) throw std::invalid_argument("acc_dngd: eta > 0");
  const auto consts = problems::compute_constants(problem);
  if (consts.mu_l <= 0.0)
    throw std::invalid_argument("acc_dngd: needs strongly convex nodes");
  const double momentum = std::sqrt(consts.mu_l * eta);

  RunRecord record;
  Tracer tracer{&problem, f_star, &record};
  std::uint64_t rounds = 0;

  NodeState x = start;
  NodeState v = start;
  NodeState y = std::move(start);
  NodeState grad_y = problem.stacked_gradient(y);
  ++tracer.grads;
  NodeState tracker = grad_y;

  NodeState mixed_y, mixed_y2, mixed_v, mixed_s;
  for (int k = 0; k < budget; ++k) {
    kernels::mix_apply(mixing, y, mixed_y, rounds);
    x = mixed_y - eta * tracker;
    kernels::mix_apply(mixing, v, mixed_v, rounds);
    kernels::mix_apply(mixing, y, mixed_y2, rounds);
    v = (1.0 - momentum) * mixed_v + momentum * mixed_y2 -
        (eta / momentum) * tracker;
    y = (x + momentum * v) / (1.0 + momentum);
    const NodeState grad_next = problem.stacked_gradient(y);
    ++tracer.grads;
    kernels::mix_apply(mixing, tracker, mixed_s, rounds);
    tracker = mixed_s + grad_next - grad_y;
    grad_y = grad_next;
    if (tracer.diverged(x) || tracer.diverged(tracker)) break;
    // gradient tracking conservation: 1^T S^k = 1^T grad F(Y^k)
    tracer.snapshot(x, rounds,
                    row_sum_gap(tracker.colwise().sum(),
                                grad_y.colwise().sum()));
  }
  record.final_state = std::move(x);
  return record;
}

RunRecord diging(const problems::ProblemInstance& problem,
                 const MixingSource& mixing, double step, NodeState start,
                 int budget, double f_star) {
  if (step <= 0.0) throw std::invalid_argument("diging: step > 0");
  RunRecord record;
  Tracer tracer{&problem, f_star, &record};
  std::uint64_t rounds = 0;

  NodeState x = std::move(start);
  NodeState grad_x = problem.stacked_gradient(x);
  ++tracer.grads;
  NodeState tracker = grad_x;

  NodeState mixed_x, mixed_y;
  for (int k = 0; k < budget; ++k) {
    kernels::mix_apply(mixing.at(k), x, mixed_x, rounds);
    x = mixed_x - step * tracker;
    const NodeState grad_next = problem.stacked_gradient(x);
    ++tracer.grads;
    kernels::mix_apply(mixing.at(k), tracker, mixed_y, rounds);
    tracker = mixed_y + grad_next - grad_x;
    grad_x = grad_next;
    if (tracer.diverged(x) || tracer.diverged(tracker)) break;
    tracer.snapshot(x, rounds,
                    row_sum_gap(tracker.colwise().sum(),
                                grad_x.colwise().sum()));
  }
  record.final_state = std::move(x);
  return record;
}

RunRecord dagd_consensus(const problems::ProblemInstance& problem,
                         const MixingSource& mixing, double l_model,
                         double mu_model, NodeState start, int consensus_t,
                         int budget, double f_star) {
  if (l_model < mu_model || mu_model <= 0.0)
    throw std::invalid_argument("dagd_consensus: need L >= mu > 0");
  if (consensus_t < 0)
    throw std::invalid_argument("dagd_consensus: consensus_t >= 0");

  RunRecord record;
  Tracer tracer{&problem, f_star, &record};
  std::uint64_t rounds = 0;

  NodeState x = start;
  NodeState u = std::move(start);
  double weight_sum = 0.0;  // A^k

  NodeState mixed;
  for (int k = 0; k < budget; ++k) {
    // greater root of (A + a)(1 + A mu) = L a^2
    const double one_plus = 1.0 + weight_sum * mu_model;
    const double disc =
        one_plus * one_plus + 4.0 * l_model * one_plus * weight_sum;
    if (disc < 0.0)
      throw std::runtime_error("dagd_consensus: degenerate step root");
    const double alpha = (one_plus + std::sqrt(disc)) / (2.0 * l_model);
    const double weight_next = weight_sum + alpha;

    const NodeState y = (alpha * u + weight_sum * x) / weight_next;
    const NodeState grad_y = problem.stacked_gradient(y);
    ++tracer.grads;
    const double denom = one_plus + mu_model;
    NodeState v = (mu_model * y + one_plus * u) / denom -
                  (alpha / denom) * grad_y;
    for (int t = 0; t < consensus_t; ++t) {
      kernels::mix_apply(mixing.at(k * consensus_t + t), v, mixed, rounds);
      v = mixed;
    }
    u = std::move(v);
    x = (alpha * u + weight_sum * x) / weight_next;
    weight_sum = weight_next;
    // A^k grows geometrically and only enters through ratios; rescale
    // before it overflows (relative perturbation O(1/A))
    if (weight_sum > 1e100) weight_sum *= 1e-50;
    if (tracer.diverged(x)) break;
    // tracking slot stores the subroutine output consensus error,
    // comparable against delta'
    tracer.snapshot(x, rounds, consensus::consensus_error(u));
  }
  record.final_state = std::move(x);
  return record;
}

double tune_acc_dngd_eta(const problems::ProblemInstance& problem,
                         const Eigen::MatrixXd& mixing, const NodeState& start,
                         int probe_budget) {
  const auto consts = problems::compute_constants(problem);
  double eta = 1.0 / consts.l_l;
  for (int attempt = 0; attempt < 40; ++attempt) {
    const auto probe =
        acc_dngd(problem, mixing, eta, start, probe_budget, 0.0);
    const bool shrinking =
        !probe.diverged &&
        probe.f_residual.back() <=
            std::max(probe.f_residual.front() * 0.9, 1e-13);
    // a stable probe can still blow up later; keep one halving in reserve
    if (shrinking) return eta * 0.5;
    eta *= 0.5;
  }
  return eta;
}

InexactOracleParams inexact_oracle_params(
    const problems::ConstantSummary& constants, int dim, double eps,
    const consensus::ContractionEstimate& contraction,
    double start_dist_to_opt, double grad_norm_at_opt,
    std::optional<double> delta_prime_override) {
  if (eps <= 0.0) throw std::invalid_argument("inexact_oracle_params: eps > 0");
  InexactOracleParams params;
  params.l_model = 2.0 * constants.l_g;
  params.mu_model = 0.5 * constants.mu_g;

  params.delta_prime =
      delta_prime_override.value_or(dim * eps / 32.0 *
                                    std::pow(constants.mu_g, 1.5) /
                                    (std::sqrt(constants.l_g) *
                                     constants.l_l * constants.l_l));
  params.delta = 1.0 / (2.0 * dim) *
                 (constants.l_l * constants.l_l / constants.l_g +
                  2.0 * constants.l_l * constants.l_l / constants.mu_g +
                  constants.l_l - constants.mu_l) *
                 params.delta_prime;

  const double lm = std::sqrt(params.l_model * params.mu_model);
  const double sqrt_d =
      (2.0 * constants.l_l / lm + 1.0) * std::sqrt(params.delta_prime) +
      constants.l_l / params.mu_model * std::sqrt((double)dim) *
          std::sqrt(start_dist_to_opt * start_dist_to_opt +
                    8.0 * params.delta_prime / lm) +
      2.0 * grad_norm_at_opt / lm;
  params.d_bound = sqrt_d * sqrt_d;
  const double t_real = contraction.tau / (2.0 * contraction.lambda) *
                        std::log(params.d_bound / params.delta_prime);
  params.consensus_t = std::max(1, (int)std::ceil(t_real));
  return params;
}

}  // namespace decopt::primal
