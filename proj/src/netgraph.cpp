#include "decopt/netgraph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace decopt::graph {

Family family_from_string(const std::string& name) {
  if (name == "path") return Family::path;
  if (name == "cycle") return Family::cycle;
  if (name == "star") return Family::star;
  if (name == "complete") return Family::complete;
  if (name == "erdos_renyi") return Family::erdos_renyi;
  throw std::invalid_argument("unknown graph family: " + name);
}

std::string family_to_string(Family f) {
  switch (f) {
    case Family::path: return "path";
    case Family::cycle: return "cycle";
    case Family::star: return "star";
    case Family::complete: return "complete";
    case Family::erdos_renyi: return "erdos_renyi";
  }
  return "?";
}

namespace {

void normalize_edges(std::vector<std::pair<int, int>>& edges) {
  for (auto& e : edges) {
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

}  // namespace

bool Graph::has_edge(int i, int j) const {
  if (i > j) std::swap(i, j);
  return std::binary_search(edges.begin(), edges.end(), std::make_pair(i, j));
}

std::vector<int> Graph::degrees() const {
  std::vector<int> deg(node_count, 0);
  for (const auto& [i, j] : edges) {
    ++deg[i];
    ++deg[j];
  }
  return deg;
}

bool Graph::connected() const {
  if (node_count <= 0) return false;
  if (node_count == 1) return true;
  std::vector<std::vector<int>> adj(node_count);
  for (const auto& [i, j] : edges) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  std::vector<char> seen(node_count, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        q.push(v);
      }
    }
  }
  return reached == node_count;
}

std::string Graph::to_edge_list() const {
  std::ostringstream os;
  for (const auto& [i, j] : edges) os << (i + 1) << ' ' << (j + 1) << '\n';
  return os.str();
}

Graph Graph::from_edge_list(const std::string& text) {
  Graph g;
  std::istringstream is(text);
  int a, b;
  int max_node = 0;
  while (is >> a >> b) {
    if (a < 1 || b < 1 || a == b)
      throw std::invalid_argument("bad edge in edge list");
    g.edges.emplace_back(a - 1, b - 1);
    max_node = std::max({max_node, a, b});
  }
  g.node_count = max_node;
  normalize_edges(g.edges);
  return g;
}

Graph generate_graph(Family family, int node_count, std::uint64_t seed) {
  if (node_count < 2)
    throw std::invalid_argument("generate_graph: need at least 2 nodes");
  Graph g;
  g.node_count = node_count;
  switch (family) {
    case Family::path:
      for (int i = 0; i + 1 < node_count; ++i) g.edges.emplace_back(i, i + 1);
      break;
    case Family::cycle:
      for (int i = 0; i + 1 < node_count; ++i) g.edges.emplace_back(i, i + 1);
      g.edges.emplace_back(0, node_count - 1);
      break;
    case Family::star:
      for (int i = 1; i < node_count; ++i) g.edges.emplace_back(0, i);
      break;
    case Family::complete:
      for (int i = 0; i < node_count; ++i)
        for (int j = i + 1; j < node_count; ++j) g.edges.emplace_back(i, j);
      break;
    case Family::erdos_renyi: {
      // edge prob 2 ln m / m, retried until connected
      Rng rng(seed);
      const double p =
          std::min(1.0, 2.0 * std::log(std::max(2, node_count)) / node_count);
      for (int attempt = 0; attempt < 1000; ++attempt) {
        g.edges.clear();
        for (int i = 0; i < node_count; ++i)
          for (int j = i + 1; j < node_count; ++j)
            if (rng.uniform() < p) g.edges.emplace_back(i, j);
        normalize_edges(g.edges);
        if (g.connected()) return g;
      }
      throw std::runtime_error("erdos_renyi: no connected sample found");
    }
  }
  normalize_edges(g.edges);
  return g;
}

Eigen::MatrixXd build_laplacian(const Graph& g) {
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(g.node_count, g.node_count);
  for (const auto& [i, j] : g.edges) {
    lap(i, j) = -1.0;
    lap(j, i) = -1.0;
    lap(i, i) += 1.0;
    lap(j, j) += 1.0;
  }
  return lap;
}

Eigen::MatrixXd metropolis_mixing(const Graph& g) {
  if (!g.connected())
    throw std::invalid_argument("metropolis_mixing: graph must be connected");
  const auto deg = g.degrees();
  const int m = g.node_count;
  Eigen::MatrixXd mix = Eigen::MatrixXd::Zero(m, m);
  for (const auto& [i, j] : g.edges) {
    const double w = 1.0 / (1.0 + std::max(deg[i], deg[j]));
    mix(i, j) = w;
    mix(j, i) = w;
  }
  for (int i = 0; i < m; ++i) mix(i, i) = 1.0 - mix.row(i).sum();
  return mix;
}

Eigen::MatrixXd laplacian_mixing(const Eigen::MatrixXd& laplacian) {
  const auto spec = spectral_summary(laplacian, MatrixKind::laplacian);
  if (spec.lambda_max <= 0.0)
    throw std::invalid_argument("laplacian_mixing: zero matrix");
  const int m = static_cast<int>(laplacian.rows());
  return Eigen::MatrixXd::Identity(m, m) - laplacian / spec.lambda_max;
}

SpectralSummary spectral_summary(const Eigen::MatrixXd& matrix,
                                 MatrixKind kind) {
  if (matrix.rows() != matrix.cols())
    throw std::invalid_argument("spectral_summary: matrix must be square");
  if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("spectral_summary: matrix must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(matrix,
                                                    Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = es.eigenvalues();  // ascending
  SpectralSummary s;
  s.lambda_max = ev[ev.size() - 1];
  const double threshold = 1e-9 * std::abs(s.lambda_max);
  s.lambda_min_plus = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] > threshold) {
      s.lambda_min_plus = ev[i];
      break;
    }
  }
  if (kind == MatrixKind::laplacian) {
    s.chi = s.lambda_min_plus > 0.0 ? s.lambda_max / s.lambda_min_plus : 0.0;
  } else {
    // second-largest absolute eigenvalue; the largest is 1 for a valid
    // mixing matrix
    double second = 0.0;
    double best = 0.0;
    Eigen::Index best_idx = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      if (std::abs(ev[i]) > best) {
        best = std::abs(ev[i]);
        best_idx = i;
      }
    }
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      if (i == best_idx) continue;
      second = std::max(second, std::abs(ev[i]));
    }
    if (second < threshold) second = 0.0;
    s.lambda2_mix = second;
    s.chi = second < 1.0 ? 1.0 / (1.0 - second) : 0.0;
  }
  return s;
}

Eigen::MatrixXd kron_lift(const Eigen::MatrixXd& laplacian, int block_dim) {
  if (block_dim < 1) throw std::invalid_argument("kron_lift: block_dim >= 1");
  const int m = static_cast<int>(laplacian.rows());
  Eigen::MatrixXd lifted = Eigen::MatrixXd::Zero(m * block_dim, m * block_dim);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (laplacian(i, j) != 0.0)
        lifted.block(i * block_dim, j * block_dim, block_dim, block_dim) =
            laplacian(i, j) *
            Eigen::MatrixXd::Identity(block_dim, block_dim);
  return lifted;
}

Eigen::MatrixXd sqrt_psd(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() != matrix.cols() ||
      (matrix - matrix.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("sqrt_psd: matrix must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(matrix);
  Eigen::VectorXd ev = es.eigenvalues();
  const double lam_max = std::max(0.0, ev[ev.size() - 1]);
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < -1e-8 * std::max(lam_max, 1.0))
      throw std::invalid_argument("sqrt_psd: matrix is indefinite");
    ev[i] = std::sqrt(std::max(0.0, ev[i]));
  }
  Eigen::MatrixXd root = es.eigenvectors() * ev.asDiagonal() *
                         es.eigenvectors().transpose();
  return 0.5 * (root + root.transpose());
}

Graph window_union(const GraphSequence& seq, int first, int count) {
  Graph u;
  if (seq.graphs.empty()) return u;
  u.node_count = seq.graphs.front().node_count;
  for (int k = first; k < first + count && k < (int)seq.graphs.size(); ++k)
    u.edges.insert(u.edges.end(), seq.graphs[k].edges.begin(),
                   seq.graphs[k].edges.end());
  std::sort(u.edges.begin(), u.edges.end());
  u.edges.erase(std::unique(u.edges.begin(), u.edges.end()), u.edges.end());
  return u;
}

bool windows_connected(const GraphSequence& seq) {
  const int rounds = static_cast<int>(seq.graphs.size());
  for (int k = 0; k + seq.window_b <= rounds; ++k)
    if (!window_union(seq, k, seq.window_b).connected()) return false;
  return true;
}

GraphSequence generate_time_varying(const Graph& base, int rounds,
                                    double drop_prob, int window_b,
                                    std::uint64_t seed) {
  if (!base.connected())
    throw std::invalid_argument("generate_time_varying: base not connected");
  if (drop_prob < 0.0 || drop_prob >= 1.0)
    throw std::invalid_argument("generate_time_varying: drop_prob in [0,1)");
  if (window_b < 1 || rounds < 1)
    throw std::invalid_argument("generate_time_varying: bad rounds/window");

  Rng rng(seed);
  GraphSequence seq;
  seq.window_b = window_b;
  seq.graphs.resize(rounds);
  for (int k = 0; k < rounds; ++k) {
    Graph g;
    g.node_count = base.node_count;
    for (const auto& e : base.edges)
      if (rng.uniform() >= drop_prob) g.edges.push_back(e);
    seq.graphs[k] = std::move(g);
  }

  // Repair pass: when a window union is disconnected, re-add dropped base
  // edges to the window's last round until the union connects. Bounded by
  // the base edge count, so this always terminates for a connected base.
  for (int k = 0; k + window_b <= rounds; ++k) {
    Graph uni = window_union(seq, k, window_b);
    if (uni.connected()) continue;
    Graph& tail = seq.graphs[k + window_b - 1];
    std::vector<std::pair<int, int>> candidates;
    for (const auto& e : base.edges)
      if (!tail.has_edge(e.first, e.second)) candidates.push_back(e);
    while (!uni.connected() && !candidates.empty()) {
      const auto pick = rng.next_index(candidates.size());
      const auto edge = candidates[pick];
      candidates.erase(candidates.begin() + static_cast<long>(pick));
      tail.edges.push_back(edge);
      normalize_edges(tail.edges);
      uni.edges.push_back(edge);
      normalize_edges(uni.edges);
    }
  }
  if (!windows_connected(seq))
    throw std::runtime_error(
        "generate_time_varying: could not certify B-connectivity");
  return seq;
}

void write_matrix_csv(const Eigen::MatrixXd& mat, std::ostream& os) {
  char buf[32];
  for (Eigen::Index i = 0; i < mat.rows(); ++i) {
    for (Eigen::Index j = 0; j < mat.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", mat(i, j));
      os << buf;
      if (j + 1 < mat.cols()) os << ',';
    }
    os << '\n';
  }
}

Eigen::MatrixXd read_matrix_csv(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return {};
  Eigen::MatrixXd mat(rows.size(), rows.front().size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j)
      mat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
  return mat;
}

}  // namespace decopt::graph
