#ifndef RCD_NETWORK_HPP
#define RCD_NETWORK_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

namespace rcd {

/// Undirected simple graph on nodes 0..n-1.
struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;  // normalized i < j, sorted, unique

  Graph() = default;
  Graph(int n, std::vector<std::pair<int, int>> edges);

  bool connected() const;  // union-find
  std::vector<int> degrees() const;
  std::vector<std::vector<int>> adjacency_lists() const;
};

Graph path_graph(int n);
Graph complete_graph(int n);
Graph star_graph(int n);  // node 0 is the hub

/// Each pair independently with probability p, resampled until connected.
/// Throws GenerationError after 100 disconnected draws.
Graph erdos_renyi(int n, double p, std::uint64_t seed);

/// Symmetric doubly stochastic consensus matrix with validated spectrum.
struct WeightMatrix {
  Eigen::MatrixXd entries;
  Eigen::VectorXd spectrum;   // eigenvalues sorted by decreasing modulus
  double consensus_gap = 0.0;  // max modulus over non-Perron eigenvalues

  int n() const { return static_cast<int>(entries.rows()); }
};

/// W = I - Laplacian / (lambda_2 + lambda_n). Throws AssumptionViolation on a
/// disconnected graph (lambda_2 ~ 0) or a bad spectrum.
WeightMatrix laplacian_weights(const Graph& g);

/// Metropolis rule: W_ij = 1/(1 + max(deg_i, deg_j)) on edges, diagonal
/// fills the row to one.
WeightMatrix metropolis_weights(const Graph& g);

/// Validates double stochasticity, graph-conforming sparsity and |d| < 1 on
/// the non-Perron spectrum; fills spectrum/consensus_gap. Used by both weight
/// rules and by config validation for externally supplied matrices.
WeightMatrix validate_weight_matrix(Eigen::MatrixXd w, const Graph& g);

}  // namespace rcd

#endif  // RCD_NETWORK_HPP
