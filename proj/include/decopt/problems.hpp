#ifndef DECOPT_PROBLEMS_HPP
#define DECOPT_PROBLEMS_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Cholesky>

#include "decopt/rng.hpp"

namespace decopt::problems {

using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class DomainKind { all_space, box, simplex };

struct Domain {
  DomainKind kind = DomainKind::all_space;
  double box_lo = -1.0;
  double box_hi = 1.0;

  VectorXd project(const VectorXd& x) const;
  bool contains(const VectorXd& x, double tol = 1e-12) const;
  VectorXd center(int dim) const;
  // Euclidean diameter; infinite for all_space.
  double diameter_l2(int dim) const;
};

// Euclidean projection onto the probability simplex (sort-based).
VectorXd project_simplex(const VectorXd& x);

class NodeFunction {
 public:
  virtual ~NodeFunction() = default;
  virtual double value(const VectorXd& x) const = 0;
  // Gradient, or a deterministic subgradient selection at kinks.
  virtual VectorXd gradient(const VectorXd& x) const = 0;
  virtual bool has_conjugate() const { return false; }
  // argmax_x { <y,x> - f(x) }; only for strongly convex nodes.
  virtual VectorXd conjugate_argmax(const VectorXd& y) const;
};

class QuadraticNode : public NodeFunction {
 public:
  QuadraticNode(MatrixXd hessian, VectorXd linear);
  double value(const VectorXd& x) const override;
  VectorXd gradient(const VectorXd& x) const override;
  bool has_conjugate() const override { return true; }
  VectorXd conjugate_argmax(const VectorXd& y) const override;
  const MatrixXd& hessian() const { return hessian_; }
  const VectorXd& linear() const { return linear_; }

 private:
  MatrixXd hessian_;
  VectorXd linear_;
  Eigen::LLT<MatrixXd> factor_;
};

class LogisticNode : public NodeFunction {
 public:
  LogisticNode(MatrixXd data, VectorXd labels, double reg_mu);
  double value(const VectorXd& x) const override;
  VectorXd gradient(const VectorXd& x) const override;
  bool has_conjugate() const override { return reg_mu_ > 0.0; }
  // Inner Newton solve of grad f(x) = y to 1e-12; throws past the
  // iteration cap.
  VectorXd conjugate_argmax(const VectorXd& y) const override;
  double smoothness() const;
  const MatrixXd& data() const { return data_; }
  const VectorXd& labels() const { return labels_; }
  double reg() const { return reg_mu_; }

 private:
  MatrixXd data_;
  VectorXd labels_;
  double reg_mu_;
};

// Mean absolute-deviation regression, scale * sum_j |z_j^T x - c_j|.
// Subgradient at a kink takes the midpoint selection sign(0) = 0.
class L1RegressionNode : public NodeFunction {
 public:
  L1RegressionNode(MatrixXd data, VectorXd targets, double scale,
                   double reg_mu = 0.0);
  double value(const VectorXd& x) const override;
  VectorXd gradient(const VectorXd& x) const override;
  double subgradient_bound(double domain_radius) const;
  const MatrixXd& data() const { return data_; }
  const VectorXd& targets() const { return targets_; }
  double scale() const { return scale_; }
  double reg() const { return reg_mu_; }

 private:
  MatrixXd data_;
  VectorXd targets_;
  double scale_;
  double reg_mu_;
};

class HingeNode : public NodeFunction {
 public:
  HingeNode(MatrixXd data, VectorXd labels, double scale);
  double value(const VectorXd& x) const override;
  VectorXd gradient(const VectorXd& x) const override;
  const MatrixXd& data() const { return data_; }
  const VectorXd& labels() const { return labels_; }
  double scale() const { return scale_; }

 private:
  MatrixXd data_;
  VectorXd labels_;
  double scale_;
};

struct ConstantSummary {
  double mu_l = 0.0;  // min_i mu_i
  double l_l = 0.0;   // max_i L_i
  double mu_g = 0.0;  // mean mu_i
  double l_g = 0.0;   // mean L_i
  double kappa_l = 0.0;
  double kappa_g = 0.0;
};

struct ReferenceSolution {
  VectorXd x_star;
  double f_star = 0.0;  // value of the average function (1/m) sum_i f_i
  std::string method_note;
  double tolerance = 0.0;
};

struct ProblemInstance {
  int node_count = 0;
  int dim = 0;
  std::vector<std::shared_ptr<const NodeFunction>> nodes;
  VectorXd mu;        // per-node strong convexity (0 allowed)
  VectorXd smooth_l;  // per-node smoothness (0 = nonsmooth)
  double lipschitz_m = 0.0;
  Domain domain;
  bool smooth = true;

  double node_value(int i, const VectorXd& x) const;
  VectorXd node_gradient(int i, const VectorXd& x) const;

  // (1/m) sum_i f_i(x) at a common point
  double average_value(const VectorXd& x) const;
  VectorXd average_gradient(const VectorXd& x) const;

  // stacked F(X) = sum_i f_i(x_i); rows of X are per-node points
  double stacked_value(const MatrixXd& state) const;
  MatrixXd stacked_gradient(const MatrixXd& state) const;  // node-parallel
  MatrixXd stacked_gradient_serial(const MatrixXd& state) const;

  // vectorized variants over flat R^{m n} points (node blocks of size dim)
  double stacked_value_flat(const VectorXd& x) const;
  VectorXd stacked_gradient_flat(const VectorXd& x) const;

  bool dual_friendly() const;
  // rows of out are x_i(y_i) for rows y_i of dual_rows
  MatrixXd conjugate_argmax_rows(const MatrixXd& dual_rows) const;
};

ProblemInstance make_quadratic(int node_count, int dim, double kappa_target,
                               std::uint64_t seed);
ProblemInstance make_logistic(int node_count, int dim, int samples_per_node,
                              double reg_mu, std::uint64_t seed);

enum class NonsmoothKind { l1_regression, hinge };
ProblemInstance make_nonsmooth(int node_count, int dim, NonsmoothKind kind,
                               std::uint64_t seed, double reg_mu = 0.0);

// Assemble an instance from explicit quadratic data (test construction).
ProblemInstance from_quadratic_data(const std::vector<MatrixXd>& hessians,
                                    const std::vector<VectorXd>& linears,
                                    Domain domain = {});

ConstantSummary compute_constants(const ProblemInstance& problem);

// CSV bundle serialization so runs are replayable: a manifest plus one CSV
// per node data block, written under `dir`.
void save_bundle(const ProblemInstance& problem, const std::string& dir);
ProblemInstance load_bundle(const std::string& dir);

// Centralized high-accuracy reference: closed form for pure quadratics,
// accelerated (projected) gradient for smooth instances, averaged
// subgradient descent otherwise.
ReferenceSolution solve_reference(const ProblemInstance& problem, double tol,
                                  long budget = 2000000);

}  // namespace decopt::problems

#endif
