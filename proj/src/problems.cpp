#include "decopt/problems.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "decopt/kernels.hpp"
#include "decopt/netgraph.hpp"

namespace decopt::problems {

VectorXd project_simplex(const VectorXd& x) {
  const Eigen::Index n = x.size();
  std::vector<double> sorted(x.data(), x.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double running = 0.0;
  double theta = 0.0;
  int pivot = 0;
  for (int j = 0; j < (int)n; ++j) {
    running += sorted[j];
    const double t = (running - 1.0) / (j + 1);
    if (sorted[j] - t > 0.0) {
      pivot = j + 1;
      theta = t;
    }
  }
  (void)pivot;
  return (x.array() - theta).max(0.0).matrix();
}

VectorXd Domain::project(const VectorXd& x) const {
  switch (kind) {
    case DomainKind::all_space:
      return x;
    case DomainKind::box:
      return x.array().max(box_lo).min(box_hi).matrix();
    case DomainKind::simplex:
      return project_simplex(x);
  }
  return x;
}

bool Domain::contains(const VectorXd& x, double tol) const {
  switch (kind) {
    case DomainKind::all_space:
      return true;
    case DomainKind::box:
      return (x.array() >= box_lo - tol).all() &&
             (x.array() <= box_hi + tol).all();
    case DomainKind::simplex:
      return (x.array() >= -tol).all() && std::abs(x.sum() - 1.0) <= tol;
  }
  return true;
}

VectorXd Domain::center(int dim) const {
  switch (kind) {
    case DomainKind::all_space:
      return VectorXd::Zero(dim);
    case DomainKind::box:
      return VectorXd::Constant(dim, 0.5 * (box_lo + box_hi));
    case DomainKind::simplex:
      return VectorXd::Constant(dim, 1.0 / dim);
  }
  return VectorXd::Zero(dim);
}

double Domain::diameter_l2(int dim) const {
  switch (kind) {
    case DomainKind::all_space:
      return std::numeric_limits<double>::infinity();
    case DomainKind::box:
      return (box_hi - box_lo) * std::sqrt((double)dim);
    case DomainKind::simplex:
      return std::sqrt(2.0);
  }
  return 0.0;
}

VectorXd NodeFunction::conjugate_argmax(const VectorXd&) const {
  throw std::logic_error("node function has no conjugate oracle");
}

QuadraticNode::QuadraticNode(MatrixXd hessian, VectorXd linear)
    : hessian_(std::move(hessian)), linear_(std::move(linear)) {
  factor_.compute(hessian_);
  if (factor_.info() != Eigen::Success)
    throw std::invalid_argument("QuadraticNode: hessian must be SPD");
}

double QuadraticNode::value(const VectorXd& x) const {
  return 0.5 * x.dot(hessian_ * x) - linear_.dot(x);
}

VectorXd QuadraticNode::gradient(const VectorXd& x) const {
  return hessian_ * x - linear_;
}

VectorXd QuadraticNode::conjugate_argmax(const VectorXd& y) const {
  return factor_.solve(y + linear_);
}

LogisticNode::LogisticNode(MatrixXd data, VectorXd labels, double reg_mu)
    : data_(std::move(data)), labels_(std::move(labels)), reg_mu_(reg_mu) {
  if (data_.rows() != labels_.size())
    throw std::invalid_argument("LogisticNode: data/label size mismatch");
}

double LogisticNode::value(const VectorXd& x) const {
  const Eigen::Index s = data_.rows();
  const VectorXd margins = -(labels_.array() * (data_ * x).array()).matrix();
  double acc = 0.0;
  for (Eigen::Index j = 0; j < s; ++j) {
    const double t = margins[j];
    // log(1 + e^t) without overflow
    acc += t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
  }
  return acc / s + 0.5 * reg_mu_ * x.squaredNorm();
}

VectorXd LogisticNode::gradient(const VectorXd& x) const {
  const Eigen::Index s = data_.rows();
  VectorXd grad = reg_mu_ * x;
  for (Eigen::Index j = 0; j < s; ++j) {
    const double margin = labels_[j] * data_.row(j).dot(x);
    const double sig = 1.0 / (1.0 + std::exp(margin));
    grad -= (labels_[j] * sig / s) * data_.row(j).transpose();
  }
  return grad;
}

double LogisticNode::smoothness() const {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(data_.transpose() * data_,
                                             Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues().maxCoeff();
  return reg_mu_ + top / (4.0 * data_.rows());
}

VectorXd LogisticNode::conjugate_argmax(const VectorXd& y) const {
  if (reg_mu_ <= 0.0)
    throw std::logic_error("LogisticNode conjugate needs reg_mu > 0");
  const Eigen::Index s = data_.rows();
  VectorXd x = y / reg_mu_;  // start from the regularizer-only solution
  for (int iter = 0; iter < 200; ++iter) {
    const VectorXd res = gradient(x) - y;
    if (res.norm() <= 1e-12) return x;
    MatrixXd hess =
        reg_mu_ * MatrixXd::Identity(x.size(), x.size());
    for (Eigen::Index j = 0; j < s; ++j) {
      const double margin = labels_[j] * data_.row(j).dot(x);
      const double sig = 1.0 / (1.0 + std::exp(margin));
      hess += (sig * (1.0 - sig) / s) * data_.row(j).transpose() *
              data_.row(j);
    }
    x -= hess.ldlt().solve(res);
  }
  throw std::runtime_error("logistic conjugate: Newton did not converge");
}

L1RegressionNode::L1RegressionNode(MatrixXd data, VectorXd targets,
                                   double scale, double reg_mu)
    : data_(std::move(data)),
      targets_(std::move(targets)),
      scale_(scale),
      reg_mu_(reg_mu) {}

double L1RegressionNode::value(const VectorXd& x) const {
  const double l1 = (data_ * x - targets_).cwiseAbs().sum();
  return scale_ * l1 + 0.5 * reg_mu_ * x.squaredNorm();
}

VectorXd L1RegressionNode::gradient(const VectorXd& x) const {
  const VectorXd res = data_ * x - targets_;
  VectorXd g = reg_mu_ * x;
  for (Eigen::Index j = 0; j < res.size(); ++j) {
    const double s = res[j] > 0.0 ? 1.0 : (res[j] < 0.0 ? -1.0 : 0.0);
    if (s != 0.0) g += (scale_ * s) * data_.row(j).transpose();
  }
  return g;
}

double L1RegressionNode::subgradient_bound(double domain_radius) const {
  double bound = 0.0;
  for (Eigen::Index j = 0; j < data_.rows(); ++j)
    bound += data_.row(j).norm();
  return scale_ * bound + reg_mu_ * domain_radius;
}

HingeNode::HingeNode(MatrixXd data, VectorXd labels, double scale)
    : data_(std::move(data)), labels_(std::move(labels)), scale_(scale) {}

double HingeNode::value(const VectorXd& x) const {
  double acc = 0.0;
  for (Eigen::Index j = 0; j < data_.rows(); ++j)
    acc += std::max(0.0, 1.0 - labels_[j] * data_.row(j).dot(x));
  return scale_ * acc;
}

VectorXd HingeNode::gradient(const VectorXd& x) const {
  VectorXd g = VectorXd::Zero(x.size());
  for (Eigen::Index j = 0; j < data_.rows(); ++j) {
    const double margin = 1.0 - labels_[j] * data_.row(j).dot(x);
    double w = 0.0;
    if (margin > 0.0) w = 1.0;
    else if (margin == 0.0) w = 0.5;  // midpoint selection at the kink
    if (w != 0.0) g -= (scale_ * w * labels_[j]) * data_.row(j).transpose();
  }
  return g;
}

double ProblemInstance::node_value(int i, const VectorXd& x) const {
  return nodes[i]->value(x);
}

VectorXd ProblemInstance::node_gradient(int i, const VectorXd& x) const {
  return nodes[i]->gradient(x);
}

double ProblemInstance::average_value(const VectorXd& x) const {
  double acc = 0.0;
  for (const auto& f : nodes) acc += f->value(x);
  return acc / node_count;
}

VectorXd ProblemInstance::average_gradient(const VectorXd& x) const {
  VectorXd g = VectorXd::Zero(dim);
  for (const auto& f : nodes) g += f->gradient(x);
  return g / node_count;
}

double ProblemInstance::stacked_value(const MatrixXd& state) const {
  double acc = 0.0;
  for (int i = 0; i < node_count; ++i)
    acc += nodes[i]->value(state.row(i).transpose());
  return acc;
}

MatrixXd ProblemInstance::stacked_gradient(const MatrixXd& state) const {
  MatrixXd out;
  kernels::map_rows(
      state,
      [this](int i, const VectorXd& x) { return nodes[i]->gradient(x); },
      out);
  return out;
}

MatrixXd ProblemInstance::stacked_gradient_serial(const MatrixXd& state) const {
  MatrixXd out;
  kernels::map_rows_serial(
      state,
      [this](int i, const VectorXd& x) { return nodes[i]->gradient(x); },
      out);
  return out;
}

double ProblemInstance::stacked_value_flat(const VectorXd& x) const {
  double acc = 0.0;
  for (int i = 0; i < node_count; ++i)
    acc += nodes[i]->value(x.segment((Eigen::Index)i * dim, dim));
  return acc;
}

VectorXd ProblemInstance::stacked_gradient_flat(const VectorXd& x) const {
  VectorXd g(x.size());
  for (int i = 0; i < node_count; ++i)
    g.segment((Eigen::Index)i * dim, dim) =
        nodes[i]->gradient(x.segment((Eigen::Index)i * dim, dim));
  return g;
}

bool ProblemInstance::dual_friendly() const {
  return std::all_of(nodes.begin(), nodes.end(),
                     [](const auto& f) { return f->has_conjugate(); });
}

MatrixXd ProblemInstance::conjugate_argmax_rows(const MatrixXd& dual_rows) const {
  MatrixXd out;
  kernels::map_rows(
      dual_rows,
      [this](int i, const VectorXd& y) { return nodes[i]->conjugate_argmax(y); },
      out);
  return out;
}

namespace {

MatrixXd random_orthogonal(int dim, Rng& rng) {
  MatrixXd gauss(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) gauss(i, j) = rng.normal();
  Eigen::HouseholderQR<MatrixXd> qr(gauss);
  MatrixXd q = qr.householderQ();
  // fix signs for determinism across backends
  const MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

}  // namespace

ProblemInstance make_quadratic(int node_count, int dim, double kappa_target,
                               std::uint64_t seed) {
  if (kappa_target < 1.0)
    throw std::invalid_argument("make_quadratic: kappa_target >= 1");
  ProblemInstance p;
  p.node_count = node_count;
  p.dim = dim;
  p.mu = VectorXd::Ones(node_count);
  p.smooth_l = VectorXd::Constant(node_count, kappa_target);
  p.smooth = true;
  Rng rng(seed);

  // Shared eigenbasis with per-node spectrum scalings: the averaged Hessian
  // keeps the full [1, kappa] spectrum (independent bases would average out
  // to a near-isotropic matrix and hide the conditioning), while the random
  // linear terms keep the node minimizers heterogeneous.
  const MatrixXd basis = random_orthogonal(dim, rng);
  VectorXd scales(node_count);
  for (int i = 0; i < node_count; ++i) scales[i] = 0.8 + 0.4 * rng.uniform();
  scales *= node_count / scales.sum();

  VectorXd eigs(dim);
  if (dim == 1) {
    eigs[0] = kappa_target;
  } else {
    for (int j = 0; j < dim; ++j)
      eigs[j] = 1.0 + (kappa_target - 1.0) * j / (dim - 1);
  }
  for (int i = 0; i < node_count; ++i) {
    const VectorXd node_eigs = scales[i] * eigs;
    MatrixXd hess = basis * node_eigs.asDiagonal() * basis.transpose();
    hess = 0.5 * (hess + hess.transpose());
    VectorXd lin = rng.gaussian_vector(dim);
    p.nodes.push_back(std::make_shared<QuadraticNode>(hess, lin));
    p.mu[i] = dim == 1 ? scales[i] * kappa_target : scales[i];
    p.smooth_l[i] = scales[i] * kappa_target;
  }
  return p;
}

ProblemInstance make_logistic(int node_count, int dim, int samples_per_node,
                              double reg_mu, std::uint64_t seed) {
  if (reg_mu < 0.0) throw std::invalid_argument("make_logistic: reg_mu >= 0");
  ProblemInstance p;
  p.node_count = node_count;
  p.dim = dim;
  p.mu = VectorXd::Constant(node_count, reg_mu);
  p.smooth_l = VectorXd::Zero(node_count);
  p.smooth = true;
  Rng rng(seed);
  const VectorXd truth = rng.gaussian_vector(dim);
  for (int i = 0; i < node_count; ++i) {
    MatrixXd data(samples_per_node, dim);
    VectorXd labels(samples_per_node);
    for (int j = 0; j < samples_per_node; ++j) {
      for (int c = 0; c < dim; ++c) data(j, c) = rng.normal();
      const double score = data.row(j).dot(truth) + 0.3 * rng.normal();
      labels[j] = score >= 0.0 ? 1.0 : -1.0;
    }
    auto node = std::make_shared<LogisticNode>(data, labels, reg_mu);
    p.smooth_l[i] = node->smoothness();
    p.nodes.push_back(std::move(node));
  }
  return p;
}

ProblemInstance make_nonsmooth(int node_count, int dim, NonsmoothKind kind,
                               std::uint64_t seed, double reg_mu) {
  ProblemInstance p;
  p.node_count = node_count;
  p.dim = dim;
  p.mu = VectorXd::Constant(node_count, reg_mu);
  p.smooth_l = VectorXd::Zero(node_count);
  p.smooth = false;
  Rng rng(seed);
  const int samples = std::max(2, dim);
  double m_bound = 0.0;
  for (int i = 0; i < node_count; ++i) {
    MatrixXd data(samples, dim);
    for (int j = 0; j < samples; ++j)
      for (int c = 0; c < dim; ++c) data(j, c) = rng.normal();
    if (kind == NonsmoothKind::l1_regression) {
      VectorXd targets = rng.gaussian_vector(samples);
      auto node = std::make_shared<L1RegressionNode>(data, targets,
                                                     1.0 / samples, reg_mu);
      m_bound = std::max(m_bound, node->subgradient_bound(10.0));
      p.nodes.push_back(std::move(node));
    } else {
      VectorXd labels(samples);
      for (int j = 0; j < samples; ++j)
        labels[j] = rng.uniform() < 0.5 ? -1.0 : 1.0;
      double node_bound = 0.0;
      for (int j = 0; j < samples; ++j) node_bound += data.row(j).norm();
      m_bound = std::max(m_bound, node_bound / samples);
      p.nodes.push_back(
          std::make_shared<HingeNode>(data, labels, 1.0 / samples));
    }
  }
  p.lipschitz_m = m_bound;
  return p;
}

ProblemInstance from_quadratic_data(const std::vector<MatrixXd>& hessians,
                                    const std::vector<VectorXd>& linears,
                                    Domain domain) {
  if (hessians.size() != linears.size() || hessians.empty())
    throw std::invalid_argument("from_quadratic_data: bad inputs");
  ProblemInstance p;
  p.node_count = static_cast<int>(hessians.size());
  p.dim = static_cast<int>(hessians.front().rows());
  p.domain = domain;
  p.mu = VectorXd::Zero(p.node_count);
  p.smooth_l = VectorXd::Zero(p.node_count);
  for (int i = 0; i < p.node_count; ++i) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(hessians[i],
                                               Eigen::EigenvaluesOnly);
    p.mu[i] = es.eigenvalues().minCoeff();
    p.smooth_l[i] = es.eigenvalues().maxCoeff();
    p.nodes.push_back(
        std::make_shared<QuadraticNode>(hessians[i], linears[i]));
  }
  return p;
}

ConstantSummary compute_constants(const ProblemInstance& problem) {
  ConstantSummary c;
  c.mu_l = problem.mu.minCoeff();
  c.l_l = problem.smooth_l.maxCoeff();
  c.mu_g = problem.mu.mean();
  c.l_g = problem.smooth_l.mean();
  c.kappa_l = c.mu_l > 0.0 ? c.l_l / c.mu_l : 0.0;
  c.kappa_g = c.mu_g > 0.0 ? c.l_g / c.mu_g : 0.0;
  return c;
}

namespace {

bool all_quadratic(const ProblemInstance& p) {
  for (const auto& f : p.nodes)
    if (!dynamic_cast<const QuadraticNode*>(f.get())) return false;
  return true;
}

}  // namespace


namespace {

void write_csv_file(const std::string& path, const MatrixXd& mat) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  graph::write_matrix_csv(mat, os);
}

MatrixXd read_csv_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path);
  return graph::read_matrix_csv(is);
}

std::string domain_name(DomainKind kind) {
  switch (kind) {
    case DomainKind::all_space: return "all_space";
    case DomainKind::box: return "box";
    case DomainKind::simplex: return "simplex";
  }
  return "all_space";
}

DomainKind domain_from_name(const std::string& name) {
  if (name == "box") return DomainKind::box;
  if (name == "simplex") return DomainKind::simplex;
  return DomainKind::all_space;
}

}  // namespace

void save_bundle(const ProblemInstance& problem, const std::string& dir) {
  std::filesystem::create_directories(dir);
  nlohmann::json manifest;
  manifest["schema_version"] = 1;
  manifest["node_count"] = problem.node_count;
  manifest["dim"] = problem.dim;
  manifest["domain"] = domain_name(problem.domain.kind);
  manifest["box_lo"] = problem.domain.box_lo;
  manifest["box_hi"] = problem.domain.box_hi;
  manifest["lipschitz_m"] = problem.lipschitz_m;
  manifest["smooth"] = problem.smooth;
  manifest["nodes"] = nlohmann::json::array();

  for (int i = 0; i < problem.node_count; ++i) {
    const std::string stem = dir + "/node_" + std::to_string(i);
    nlohmann::json entry;
    entry["mu"] = problem.mu[i];
    entry["smooth_l"] = problem.smooth_l[i];
    const NodeFunction* node = problem.nodes[i].get();
    if (const auto* q = dynamic_cast<const QuadraticNode*>(node)) {
      entry["kind"] = "quadratic";
      write_csv_file(stem + "_a.csv", q->hessian());
      write_csv_file(stem + "_b.csv", q->linear());
    } else if (const auto* l = dynamic_cast<const LogisticNode*>(node)) {
      entry["kind"] = "logistic";
      entry["reg_mu"] = l->reg();
      write_csv_file(stem + "_a.csv", l->data());
      write_csv_file(stem + "_b.csv", l->labels());
    } else if (const auto* r = dynamic_cast<const L1RegressionNode*>(node)) {
      entry["kind"] = "l1_regression";
      entry["scale"] = r->scale();
      entry["reg_mu"] = r->reg();
      write_csv_file(stem + "_a.csv", r->data());
      write_csv_file(stem + "_b.csv", r->targets());
    } else if (const auto* hg = dynamic_cast<const HingeNode*>(node)) {
      entry["kind"] = "hinge";
      entry["scale"] = hg->scale();
      write_csv_file(stem + "_a.csv", hg->data());
      write_csv_file(stem + "_b.csv", hg->labels());
    } else {
      throw std::invalid_argument("save_bundle: unsupported node kind");
    }
    manifest["nodes"].push_back(entry);
  }
  std::ofstream os(dir + "/manifest.json", std::ios::binary);
  if (!os) throw std::runtime_error("cannot write manifest in " + dir);
  os << manifest.dump(2) << '\n';
}

ProblemInstance load_bundle(const std::string& dir) {
  std::ifstream is(dir + "/manifest.json", std::ios::binary);
  if (!is) throw std::runtime_error("cannot read manifest in " + dir);
  nlohmann::json manifest;
  is >> manifest;

  ProblemInstance problem;
  problem.node_count = manifest.at("node_count").get<int>();
  problem.dim = manifest.at("dim").get<int>();
  problem.domain.kind =
      domain_from_name(manifest.at("domain").get<std::string>());
  problem.domain.box_lo = manifest.at("box_lo").get<double>();
  problem.domain.box_hi = manifest.at("box_hi").get<double>();
  problem.lipschitz_m = manifest.at("lipschitz_m").get<double>();
  problem.smooth = manifest.at("smooth").get<bool>();
  problem.mu = VectorXd::Zero(problem.node_count);
  problem.smooth_l = VectorXd::Zero(problem.node_count);

  for (int i = 0; i < problem.node_count; ++i) {
    const auto& entry = manifest.at("nodes").at(i);
    problem.mu[i] = entry.at("mu").get<double>();
    problem.smooth_l[i] = entry.at("smooth_l").get<double>();
    const std::string stem = dir + "/node_" + std::to_string(i);
    const MatrixXd a = read_csv_file(stem + "_a.csv");
    const MatrixXd b_mat = read_csv_file(stem + "_b.csv");
    const VectorXd b = b_mat.col(0);
    const std::string kind = entry.at("kind").get<std::string>();
    if (kind == "quadratic") {
      problem.nodes.push_back(std::make_shared<QuadraticNode>(a, b));
    } else if (kind == "logistic") {
      problem.nodes.push_back(std::make_shared<LogisticNode>(
          a, b, entry.at("reg_mu").get<double>()));
    } else if (kind == "l1_regression") {
      problem.nodes.push_back(std::make_shared<L1RegressionNode>(
          a, b, entry.at("scale").get<double>(),
          entry.at("reg_mu").get<double>()));
    } else if (kind == "hinge") {
      problem.nodes.push_back(std::make_shared<HingeNode>(
          a, b, entry.at("scale").get<double>()));
    } else {
      throw std::runtime_error("load_bundle: unknown node kind " + kind);
    }
  }
  return problem;
}

ReferenceSolution solve_reference(const ProblemInstance& problem, double tol,
                                  long budget) {
  if (tol <= 0.0) throw std::invalid_argument("solve_reference: tol > 0");
  ReferenceSolution ref;

  if (all_quadratic(problem) &&
      problem.domain.kind == DomainKind::all_space) {
    MatrixXd total_h = MatrixXd::Zero(problem.dim, problem.dim);
    VectorXd total_b = VectorXd::Zero(problem.dim);
    for (const auto& f : problem.nodes) {
      const auto* q = static_cast<const QuadraticNode*>(f.get());
      total_h += q->hessian();
      total_b += q->linear();
    }
    ref.x_star = total_h.ldlt().solve(total_b);
    ref.f_star = problem.average_value(ref.x_star);
    ref.method_note = "closed-form normal equations";
    ref.tolerance = problem.average_gradient(ref.x_star).norm();
    return ref;
  }

  const auto consts = compute_constants(problem);
  if (problem.smooth) {
    // projected accelerated gradient on the average function
    const double lips = std::max(consts.l_g, 1e-12);
    const double step = 1.0 / lips;
    VectorXd x = problem.domain.project(VectorXd::Zero(problem.dim));
    VectorXd y = x;
    double t_prev = 1.0;
    double residual = std::numeric_limits<double>::infinity();
    for (long k = 0; k < budget; ++k) {
      const VectorXd grad = problem.average_gradient(y);
      const VectorXd x_next = problem.domain.project(y - step * grad);
      residual = (y - x_next).norm() / step;
      if (residual <= tol) {
        x = x_next;
        break;
      }
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_prev * t_prev));
      y = x_next + ((t_prev - 1.0) / t_next) * (x_next - x);
      x = x_next;
      t_prev = t_next;
      // restart heuristic keeps the strongly convex case linear
      if (k % 200 == 199) {
        y = x;
        t_prev = 1.0;
      }
    }
    ref.x_star = x;
    ref.f_star = problem.average_value(x);
    ref.method_note = "projected accelerated gradient";
    ref.tolerance = residual;
    return ref;
  }

  // nonsmooth: projected subgradient with decaying steps, best-value iterate
  VectorXd x = problem.domain.project(VectorXd::Zero(problem.dim));
  VectorXd best = x;
  double best_val = problem.average_value(x);
  const double scale =
      problem.lipschitz_m > 0.0 ? 1.0 / problem.lipschitz_m : 1.0;
  for (long k = 1; k <= budget; ++k) {
    const VectorXd g = problem.average_gradient(x);
    const double step = scale / std::sqrt((double)k);
    x = problem.domain.project(x - step * g);
    const double val = problem.average_value(x);
    if (val < best_val) {
      best_val = val;
      best = x;
    }
  }
  ref.x_star = best;
  ref.f_star = best_val;
  ref.method_note = "projected subgradient descent (loose reference)";
  ref.tolerance = tol;
  return ref;
}

}  // namespace decopt::problems
