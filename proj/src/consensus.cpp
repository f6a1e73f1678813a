#include "decopt/consensus.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include <Eigen/Dense>

#include "decopt/kernels.hpp"

namespace decopt::consensus {

MixingSource::MixingSource(Eigen::MatrixXd static_matrix) {
  matrices_.push_back(std::move(static_matrix));
}

MixingSource::MixingSource(const graph::GraphSequence& seq) {
  matrices_.reserve(seq.graphs.size());
  for (const auto& g : seq.graphs) {
    // Per-round graphs may be disconnected; Metropolis weights stay valid
    // (doubly stochastic), only the contraction needs the B-window union.
    const auto deg = g.degrees();
    const int m = g.node_count;
    Eigen::MatrixXd mix = Eigen::MatrixXd::Zero(m, m);
    for (const auto& [i, j] : g.edges) {
      const double w = 1.0 / (1.0 + std::max(deg[i], deg[j]));
      mix(i, j) = w;
      mix(j, i) = w;
    }
    for (int i = 0; i < m; ++i) mix(i, i) = 1.0 - mix.row(i).sum();
    matrices_.push_back(std::move(mix));
  }
  if (matrices_.empty())
    throw std::invalid_argument("MixingSource: empty graph sequence");
}

const Eigen::MatrixXd& MixingSource::at(int round) const {
  return matrices_[static_cast<size_t>(round) % matrices_.size()];
}

NodeState mean_projection(const NodeState& state) {
  Eigen::RowVectorXd mean = state.colwise().mean();
  NodeState out(state.rows(), state.cols());
  out.rowwise() = mean;
  return out;
}

double consensus_error(const NodeState& state) {
  return (state - mean_projection(state)).norm();
}

NodeState consensus_step(const Eigen::MatrixXd& mixing, const NodeState& state,
                         std::uint64_t& rounds) {
  if (mixing.cols() != state.rows())
    throw std::invalid_argument("consensus_step: dimension mismatch");
  NodeState out;
  kernels::mix_apply(mixing, state, out, rounds);
  return out;
}

std::pair<NodeState, ConsensusReport> run_consensus(const MixingSource& mixing,
                                                    const NodeState& initial,
                                                    int iterations) {
  if (iterations < 0)
    throw std::invalid_argument("run_consensus: iterations >= 0");
  ConsensusReport report;
  NodeState state = initial;
  const NodeState target = mean_projection(initial);
  double prev_err = (state - target).norm();
  for (int t = 0; t < iterations; ++t) {
    state = consensus_step(mixing.at(t), state, report.comm_rounds);
    const double err = (state - target).norm();
    report.per_step_error.push_back(err);
    report.per_step_ratio.push_back(prev_err > 0.0 ? err / prev_err : 0.0);
    prev_err = err;
  }
  report.iterations_run = iterations;
  report.final_error = consensus_error(state);
  return {std::move(state), report};
}

NodeState accelerated_consensus(const Eigen::MatrixXd& laplacian,
                                const NodeState& initial, int iterations,
                                std::uint64_t* rounds_out) {
  const auto spec = graph::spectral_summary(laplacian, graph::MatrixKind::laplacian);
  if (spec.lambda_min_plus <= 0.0)
    throw std::invalid_argument("accelerated_consensus: disconnected graph");
  const double sl = std::sqrt(spec.lambda_max);
  const double ss = std::sqrt(spec.lambda_min_plus);
  const double momentum = (sl - ss) / (sl + ss);

  std::uint64_t rounds = 0;
  NodeState prev = initial;
  NodeState cur = initial;
  NodeState extrap, lap_prod;
  for (int k = 0; k < iterations; ++k) {
    extrap = cur + momentum * (cur - prev);
    kernels::mix_apply(laplacian, extrap, lap_prod, rounds);
    prev = cur;
    cur = extrap - lap_prod / spec.lambda_max;
  }
  if (rounds_out) *rounds_out += rounds;
  return cur;
}

int rounds_to_relative_error(const MixingSource& mixing,
                             const NodeState& initial, double tol,
                             int max_rounds) {
  const NodeState target = mean_projection(initial);
  const double base = (initial - target).norm();
  if (base == 0.0) return 0;
  NodeState state = initial;
  std::uint64_t rounds = 0;
  for (int t = 0; t < max_rounds; ++t) {
    state = consensus_step(mixing.at(t), state, rounds);
    if ((state - target).norm() <= tol * base) return t + 1;
  }
  return -1;
}

int accelerated_rounds_to_relative_error(const Eigen::MatrixXd& laplacian,
                                         const NodeState& initial, double tol,
                                         int max_rounds) {
  const auto spec = graph::spectral_summary(laplacian, graph::MatrixKind::laplacian);
  if (spec.lambda_min_plus <= 0.0)
    throw std::invalid_argument("accelerated_consensus: disconnected graph");
  const double sl = std::sqrt(spec.lambda_max);
  const double ss = std::sqrt(spec.lambda_min_plus);
  const double momentum = (sl - ss) / (sl + ss);

  const NodeState target = mean_projection(initial);
  const double base = (initial - target).norm();
  if (base == 0.0) return 0;

  std::uint64_t rounds = 0;
  NodeState prev = initial;
  NodeState cur = initial;
  NodeState extrap, lap_prod;
  for (int k = 0; k < max_rounds; ++k) {
    extrap = cur + momentum * (cur - prev);
    kernels::mix_apply(laplacian, extrap, lap_prod, rounds);
    prev = cur;
    cur = extrap - lap_prod / spec.lambda_max;
    if ((cur - target).norm() <= tol * base) return k + 1;
  }
  return -1;
}

ContractionEstimate estimate_contraction(const MixingSource& mixing,
                                         int probe_rounds, int max_tau) {
  const int m = mixing.node_count();
  const Eigen::MatrixXd avg = Eigen::MatrixXd::Constant(m, m, 1.0 / m);
  for (int tau = 1; tau <= max_tau; ++tau) {
    double worst = 0.0;
    for (int k = 0; k + tau <= probe_rounds; ++k) {
      Eigen::MatrixXd prod = mixing.at(k);
      for (int t = 1; t < tau; ++t) prod = mixing.at(k + t) * prod;
      // contraction on span(1)^perp equals the spectral norm of P - avg
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(prod - avg);
      worst = std::max(worst, svd.singularValues()[0]);
    }
    if (worst < 1.0 - 1e-12) {
      ContractionEstimate est;
      est.tau = tau;
      est.lambda = 1.0 - worst;
      return est;
    }
  }
  throw std::runtime_error("estimate_contraction: no contracting window found");
}

void write_report_csv(const ConsensusReport& report, std::ostream& os) {
  os << "schema_version,1\n";
  os << "step,error,ratio\n";
  char buf[64];
  for (size_t i = 0; i < report.per_step_error.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g", i + 1,
                  report.per_step_error[i], report.per_step_ratio[i]);
    os << buf << '\n';
  }
}

}  // namespace decopt::consensus
