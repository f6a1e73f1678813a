#ifndef DECOPT_PRIMAL_ALGOS_HPP
#define DECOPT_PRIMAL_ALGOS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "decopt/consensus.hpp"
#include "decopt/problems.hpp"

namespace decopt::primal {

using consensus::MixingSource;
using consensus::NodeState;

// Per-iteration trace of a decentralized run. One communication round is
// one multiplication by a mixing matrix; gradient calls are stacked
// evaluations (one per node each).
struct RunRecord {
  std::vector<double> f_residual;      // f(mean row) - f_star
  std::vector<double> consensus_err;   // ||X - mean||_F
  std::vector<std::uint64_t> grad_calls;   // cumulative
  std::vector<std::uint64_t> comm_rounds;  // cumulative
  std::vector<double> tracking_residual;   // algorithm-specific identity gap
  NodeState final_state;
  bool diverged = false;
  std::string note;

  // first iteration index (1-based) with f_residual <= eps and
  // consensus_err <= eps; -1 if never
  int first_hit(double eps) const;
  std::uint64_t rounds_at(int iteration) const;
  std::uint64_t grads_at(int iteration) const;
};

void write_record_csv(const RunRecord& record, std::ostream& os);

// X^{k+1} = M X^k - alpha grad F(X^k); plateaus at an alpha-dependent level.
RunRecord dgd(const problems::ProblemInstance& problem,
              const Eigen::MatrixXd& mixing, double step, NodeState start,
              int budget, double f_star);

// Exact first-order method with two mixing matrices, the second being
// (M + I)/2; one communication round per iteration after caching M X^k.
RunRecord extra(const problems::ProblemInstance& problem,
                const Eigen::MatrixXd& mixing, double step, NodeState start,
                int budget, double f_star);

// Accelerated Nesterov scheme with gradient tracking; four mixing products
// per iteration. momentum = sqrt(mu_l * eta).
RunRecord acc_dngd(const problems::ProblemInstance& problem,
                   const Eigen::MatrixXd& mixing, double eta, NodeState start,
                   int budget, double f_star);

// Gradient tracking over a (possibly time-varying) mixing sequence; two
// mixing products per iteration.
RunRecord diging(const problems::ProblemInstance& problem,
                 const MixingSource& mixing, double step, NodeState start,
                 int budget, double f_star);

// Accelerated gradient outer loop with a multi-step consensus subroutine;
// consensus_t rounds per outer iteration, model constants L = 2 L_g,
// mu = mu_g / 2.
RunRecord dagd_consensus(const problems::ProblemInstance& problem,
                         const MixingSource& mixing, double l_model,
                         double mu_model, NodeState start, int consensus_t,
                         int budget, double f_star);

// Halve eta from 1/L_l until a short probe run stays bounded.
double tune_acc_dngd_eta(const problems::ProblemInstance& problem,
                         const Eigen::MatrixXd& mixing, const NodeState& start,
                         int probe_budget = 300);

struct InexactOracleParams {
  double delta_prime = 0.0;  // consensus accuracy target
  double delta = 0.0;        // induced oracle inexactness
  double l_model = 0.0;      // 2 L_g
  double mu_model = 0.0;     // mu_g / 2
  double d_bound = 0.0;      // the D entering the T formula
  int consensus_t = 1;
};

// Parameter block for dagd_consensus: delta' from the target accuracy,
// delta from the model construction, and T from the measured contraction
// (tau, lambda) of the mixing source.
InexactOracleParams inexact_oracle_params(
    const problems::ConstantSummary& constants, int dim, double eps,
    const consensus::ContractionEstimate& contraction,
    double start_dist_to_opt, double grad_norm_at_opt,
    std::optional<double> delta_prime_override = std::nullopt);

}  // namespace decopt::primal

#endif
