#ifndef DECOPT_NETGRAPH_HPP
#define DECOPT_NETGRAPH_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "decopt/rng.hpp"

namespace decopt::graph {

enum class Family { path, cycle, star, complete, erdos_renyi };

Family family_from_string(const std::string& name);
std::string family_to_string(Family f);

// Undirected simple graph. Edges are stored normalized (i < j), sorted,
// without duplicates; nodes are 0-indexed internally.
struct Graph {
  int node_count = 0;
  std::vector<std::pair<int, int>> edges;

  bool has_edge(int i, int j) const;
  std::vector<int> degrees() const;
  bool connected() const;  // BFS traversal

  // edge-list text, one "i j" pair per line, 1-indexed
  std::string to_edge_list() const;
  static Graph from_edge_list(const std::string& text);
};

struct SpectralSummary {
  double lambda_max = 0.0;       // largest eigenvalue
  double lambda_min_plus = 0.0;  // smallest nonzero eigenvalue
  double lambda2_mix = 0.0;      // second-largest |eigenvalue| (mixing only)
  double chi = 0.0;              // condition number
};

enum class MatrixKind { laplacian, mixing };

// Time-varying topology: one graph per round, with the promise that the
// union of any window_b consecutive graphs is connected.
struct GraphSequence {
  std::vector<Graph> graphs;
  int window_b = 1;
};

Graph generate_graph(Family family, int node_count, std::uint64_t seed = 0);

// Degree-minus-adjacency matrix; PSD, kernel = consensual vectors.
Eigen::MatrixXd build_laplacian(const Graph& g);

// Metropolis weights: 1/(1 + max{deg_i, deg_j}) on edges, diagonal fills the
// remainder of each row.
Eigen::MatrixXd metropolis_mixing(const Graph& g);

// M = I - laplacian / lambda_max(laplacian)
Eigen::MatrixXd laplacian_mixing(const Eigen::MatrixXd& laplacian);

SpectralSummary spectral_summary(const Eigen::MatrixXd& matrix, MatrixKind kind);

// block lift: laplacian (m x m) -> laplacian (x) I_n (mn x mn)
Eigen::MatrixXd kron_lift(const Eigen::MatrixXd& laplacian, int block_dim);

// Symmetric PSD square root via eigendecomposition; negative eigenvalues are
// clamped to zero, inputs with an eigenvalue below -1e-8 * lambda_max are
// rejected.
Eigen::MatrixXd sqrt_psd(const Eigen::MatrixXd& matrix);

GraphSequence generate_time_varying(const Graph& base, int rounds,
                                    double drop_prob, int window_b,
                                    std::uint64_t seed);

// Union of graphs[first..first+count-1] (used for B-connectivity checks).
Graph window_union(const GraphSequence& seq, int first, int count);
bool windows_connected(const GraphSequence& seq);

void write_matrix_csv(const Eigen::MatrixXd& mat, std::ostream& os);
Eigen::MatrixXd read_matrix_csv(std::istream& is);

}  // namespace decopt::graph

#endif
