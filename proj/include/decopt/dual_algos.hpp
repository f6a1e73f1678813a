#ifndef DECOPT_DUAL_ALGOS_HPP
#define DECOPT_DUAL_ALGOS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "decopt/problems.hpp"
#include "decopt/rng.hpp"

namespace decopt::dual {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct DualCounters {
  std::uint64_t conj_calls = 0;  // conjugate solves (one per node each)
  std::uint64_t comm_rounds = 0;
};

// min f(x) s.t. A x = 0 with A = sqrt(laplacian) (x) I, f the stacked sum of
// per-node strongly convex functions. The dual objective is
// psi(y) = <A y, x(A y)> - f(x(A y)) with x(.) the blockwise conjugate
// oracle; grad psi(y) = A x(A y).
class DualProblem {
 public:
  DualProblem(const problems::ProblemInstance& problem,
              const MatrixXd& laplacian);

  int node_count() const { return m_; }
  int block_dim() const { return n_; }
  Eigen::Index lifted_dim() const { return (Eigen::Index)m_ * n_; }

  double smooth_l_psi() const { return l_psi_; }
  double strong_mu_psi() const { return mu_psi_; }
  double lambda_max_w() const { return lambda_max_; }
  double lambda_min_plus_w() const { return lambda_min_plus_; }

  void set_conjugate_noise(double sigma_x, double delta_y) {
    sigma_x_ = sigma_x;
    delta_y_ = delta_y;
  }
  bool noiseless() const { return sigma_x_ == 0.0 && delta_y_ == 0.0; }
  double sigma_psi() const { return std::sqrt(lambda_max_) * sigma_x_; }

  // one communication round each
  VectorXd apply_sqrt_w(const VectorXd& y, DualCounters& counters) const;
  VectorXd apply_w(const VectorXd& y, DualCounters& counters) const;
  VectorXd apply_sqrt_w_raw(const VectorXd& y) const;
  VectorXd apply_w_raw(const VectorXd& y) const;

  // blockwise conjugate oracle; one conjugate call per node, counted once
  VectorXd conjugate(const VectorXd& z, DualCounters& counters) const;
  VectorXd conjugate_noisy(const VectorXd& z, Rng& rng,
                           DualCounters& counters) const;
  // averaged over batch stochastic conjugate solves (batch counted)
  VectorXd conjugate_batch(const VectorXd& z, long batch, Rng& rng,
                           DualCounters& counters) const;

  double f_stacked(const VectorXd& x) const;
  double psi(const VectorXd& y, DualCounters& counters) const;
  VectorXd grad_psi(const VectorXd& y, DualCounters& counters) const;
  // uncounted diagnostics
  double psi_raw(const VectorXd& y) const;
  VectorXd grad_psi_raw(const VectorXd& y) const;

  // norm of the projection onto Ker A^T (consensual directions); the
  // subspace-confinement diagnostics
  double kernel_component_norm(const VectorXd& y) const;

  const problems::ProblemInstance& problem() const { return *problem_; }
  const MatrixXd& sqrt_laplacian() const { return sqrt_lap_; }
  const MatrixXd& laplacian() const { return lap_; }

 private:
  const problems::ProblemInstance* problem_;
  MatrixXd lap_;       // m x m
  MatrixXd sqrt_lap_;  // m x m symmetric PSD root
  int m_ = 0;
  int n_ = 0;
  double lambda_max_ = 0.0;
  double lambda_min_plus_ = 0.0;
  double l_psi_ = 0.0;
  double mu_psi_ = 0.0;
  double sigma_x_ = 0.0;
  double delta_y_ = 0.0;
};

struct DualRunRecord {
  std::vector<double> grad_norm;  // ||grad psi(y^k)|| (diagnostic)
  std::vector<double> psi_value;
  std::vector<double> gap;        // f(x~) + psi(y)
  std::vector<double> ax_norm;    // ||A x~||
  std::vector<std::uint64_t> conj_calls;
  std::vector<std::uint64_t> comm_rounds;
  VectorXd dual_point;
  VectorXd primal_point;
  std::string note;
};

enum class LiftMode { direct, lifted };

struct BatchSchedule {
  // batch size for iteration k; identity 1 in the zero-noise mode
  std::function<long(int)> size = [](int) { return 1L; };
};

// Primal-dual similar triangles on the dual problem; primal average
// maintained online from the same conjugate outputs that feed the gradient.
DualRunRecord spdstm(const DualProblem& dual, int iterations,
                     const BatchSchedule& batch, Rng& rng,
                     LiftMode mode = LiftMode::direct);

// Similar triangles with an explicit running-sum z-update for the strongly
// convex dual; primal recovered from the final conjugate batch.
DualRunRecord sstm_sc(const DualProblem& dual, int iterations,
                      const BatchSchedule& batch, Rng& rng,
                      LiftMode mode = LiftMode::direct);

// Three-sequence accelerated stochastic approximation for a lambda-strongly
// convex, l-smooth objective given through a gradient closure.
using GradClosure = std::function<VectorXd(const VectorXd&)>;
VectorXd ac_sa(const GradClosure& grad, double lambda_sc, double l_smooth,
               VectorXd start, int iterations);

// Two chained half-length runs.
VectorXd ac_sa2(const GradClosure& grad, double lambda_sc, double l_smooth,
                VectorXd start, int iterations);

// Recursive regularization around successive anchors; total iteration count
// split over floor(log2(l_tilde / lambda)) stages.
VectorXd rrma_ac_sa2(const GradClosure& base_grad, double l_psi, double lambda,
                     const VectorXd& y0, int total_iterations);

struct RestartedParams {
  double eps = 1e-6;
  double r_y = 1.0;
  double beta = 0.1;  // confidence split
  // The stage-bound constant is unspecified in the guarantee; 32 is
  // calibrated so one stage of this implementation contracts the gradient
  // norm by at least 1/2 on quadratic duals.
  double c_constant = 32.0;
  int max_phase_cap = 60;
};

struct RestartedResult {
  VectorXd point;
  std::vector<double> phase_grad_norms;  // batched estimates per phase
  int phases_run = 0;
  long rrma_iterations = 0;  // the per-call iteration count chosen
  DualCounters counters;
};

// Restart loop with batched gradient-norm estimates and amplification over
// independent trajectories (argmin of estimated norms, lowest index wins).
RestartedResult restarted_rrma(const DualProblem& dual,
                               const RestartedParams& params, Rng& rng);

struct CertificateReport {
  double grad_norm = 0.0;
  double y_norm = 0.0;
  bool hypothesis = false;
  double f_gap = 0.0;
  double ax_norm = 0.0;
  bool conclusion = false;
};

// Checks the small-gradient certificate: ||grad psi|| <= eps / r_y and
// ||y|| <= 2 r_y imply f(x(Ay)) - f* <= 2 eps and ||A x|| <= eps / r_y.
CertificateReport theorem3_certificate(const DualProblem& dual,
                                       const VectorXd& y, double eps,
                                       double r_y, double f_star_stacked);

// Min-norm dual solution for all-quadratic instances (test oracle).
struct DualReference {
  VectorXd y_star;
  double r_y = 0.0;
  double psi_star = 0.0;
};
DualReference solve_dual_reference(const DualProblem& dual);

void write_dual_record_csv(const DualRunRecord& record, std::ostream& os);

}  // namespace decopt::dual

#endif
