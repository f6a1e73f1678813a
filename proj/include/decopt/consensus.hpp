#ifndef DECOPT_CONSENSUS_HPP
#define DECOPT_CONSENSUS_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "decopt/netgraph.hpp"

namespace decopt::consensus {

// Rows of the state matrix are the per-node vectors: X = (x_1 ... x_m)^T.
using NodeState = Eigen::MatrixXd;

// Source of one mixing matrix per round. Static sources repeat a single
// matrix; time-varying sources cycle through Metropolis matrices built from
// a graph sequence.
class MixingSource {
 public:
  explicit MixingSource(Eigen::MatrixXd static_matrix);
  explicit MixingSource(const graph::GraphSequence& seq);

  const Eigen::MatrixXd& at(int round) const;
  bool is_static() const { return matrices_.size() == 1; }
  int node_count() const { return static_cast<int>(matrices_.front().rows()); }

 private:
  std::vector<Eigen::MatrixXd> matrices_;
};

struct ConsensusReport {
  int iterations_run = 0;
  double final_error = 0.0;              // ||X - mean(X)||_F
  std::vector<double> per_step_ratio;    // contraction per step
  std::vector<double> per_step_error;
  std::uint64_t comm_rounds = 0;
};

// Every row replaced by the arithmetic mean of the input rows.
NodeState mean_projection(const NodeState& state);

// Frobenius distance to the row-mean projection.
double consensus_error(const NodeState& state);

// One gossip round X' = M X (counted).
NodeState consensus_step(const Eigen::MatrixXd& mixing, const NodeState& state,
                         std::uint64_t& rounds);

// T rounds of X <- M^t X; the report records per-step contraction against
// the initial mean.
std::pair<NodeState, ConsensusReport> run_consensus(const MixingSource& mixing,
                                                    const NodeState& initial,
                                                    int iterations);

// Heavy-ball style accelerated averaging driven by the graph Laplacian; the
// momentum uses the extreme Laplacian eigenvalues. First momentum step uses
// X^{-1} = X^0.
NodeState accelerated_consensus(const Eigen::MatrixXd& laplacian,
                                const NodeState& initial, int iterations,
                                std::uint64_t* rounds_out = nullptr);

// Rounds until ||X - mean|| <= tol * ||X0 - mean||; -1 if not reached.
int rounds_to_relative_error(const MixingSource& mixing,
                             const NodeState& initial, double tol,
                             int max_rounds);
int accelerated_rounds_to_relative_error(const Eigen::MatrixXd& laplacian,
                                         const NodeState& initial, double tol,
                                         int max_rounds);

// Empirical contraction parameters of a (possibly time-varying) source: the
// smallest window tau <= max_tau with worst-case window contraction < 1, and
// that contraction expressed as (tau, lambda) with factor (1 - lambda).
struct ContractionEstimate {
  int tau = 1;
  double lambda = 0.0;
};
ContractionEstimate estimate_contraction(const MixingSource& mixing,
                                         int probe_rounds, int max_tau = 64);

void write_report_csv(const ConsensusReport& report, std::ostream& os);

}  // namespace decopt::consensus

#endif
