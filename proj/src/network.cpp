#include "rcd/network.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "rcd/errors.hpp"

namespace rcd {

namespace {

constexpr double kStochasticTol = 1e-12;

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

}  // namespace

Graph::Graph(int n_, std::vector<std::pair<int, int>> edges_) : n(n_), edges(std::move(edges_)) {
  if (n < 1) throw ArgumentError("Graph: need at least one node");
  for (auto& [i, j] : edges) {
    if (i == j) throw ArgumentError("Graph: self-loop at node " + std::to_string(i));
    if (i < 0 || j < 0 || i >= n || j >= n)
      throw ArgumentError("Graph: edge endpoint out of range");
    if (i > j) std::swap(i, j);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

bool Graph::connected() const {
  UnionFind uf(n);
  for (const auto& [i, j] : edges) uf.unite(i, j);
  const int root = uf.find(0);
  for (int v = 1; v < n; ++v)
    if (uf.find(v) != root) return false;
  return true;
}

std::vector<int> Graph::degrees() const {
  std::vector<int> deg(static_cast<std::size_t>(n), 0);
  for (const auto& [i, j] : edges) {
    ++deg[static_cast<std::size_t>(i)];
    ++deg[static_cast<std::size_t>(j)];
  }
  return deg;
}

std::vector<std::vector<int>> Graph::adjacency_lists() const {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (const auto& [i, j] : edges) {
    adj[static_cast<std::size_t>(i)].push_back(j);
    adj[static_cast<std::size_t>(j)].push_back(i);
  }
  return adj;
}

Graph path_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Graph(n, std::move(edges));
}

Graph complete_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return Graph(n, std::move(edges));
}

Graph star_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i < n; ++i) edges.emplace_back(0, i);
  return Graph(n, std::move(edges));
}

Graph erdos_renyi(int n, double p, std::uint64_t seed) {
  if (n < 1) throw ArgumentError("erdos_renyi: need at least one node");
  if (!(p >= 0.0 && p <= 1.0))
    throw ArgumentError("erdos_renyi: p must lie in [0, 1]");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  constexpr int kRetryCap = 100;
  for (int attempt = 0; attempt < kRetryCap; ++attempt) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (unif(rng) < p) edges.emplace_back(i, j);
    Graph g(n, std::move(edges));
    if (g.connected()) return g;
  }
  throw GenerationError(
      "erdos_renyi: no connected sample in 100 draws; increase the connection "
      "probability");
}

WeightMatrix validate_weight_matrix(Eigen::MatrixXd w, const Graph& g) {
  using Kind = AssumptionViolation::Kind;
  const int n = g.n;
  if (w.rows() != n || w.cols() != n)
    throw ArgumentError("weight matrix dimension does not match the graph");

  if (!w.isApprox(w.transpose(), kStochasticTol))
    throw AssumptionViolation(Kind::WeightSpectrum, "weight matrix is not symmetric");

  const Eigen::VectorXd row_sums = w.rowwise().sum();
  for (int i = 0; i < n; ++i)
    if (std::abs(row_sums(i) - 1.0) > kStochasticTol)
      throw AssumptionViolation(Kind::WeightSpectrum,
                                "row " + std::to_string(i) +
                                    " does not sum to one (got " +
                                    std::to_string(row_sums(i)) + ")");

  // Sparsity must conform to the graph: nonzero off-diagonal iff edge.
  std::vector<std::vector<bool>> is_edge(
      static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n), false));
  for (const auto& [i, j] : g.edges) {
    is_edge[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;
    is_edge[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = true;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const bool nonzero = w(i, j) != 0.0;
      if (nonzero != is_edge[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
        throw AssumptionViolation(Kind::WeightSpectrum,
                                  "weight sparsity does not match the graph at (" +
                                      std::to_string(i) + "," + std::to_string(j) + ")");
    }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(w);
  if (solver.info() != Eigen::Success)
    throw NumericError("weight matrix eigendecomposition failed");
  Eigen::VectorXd eigs = solver.eigenvalues();

  // The Perron eigenvalue is the one nearest 1 (W1 = 1 puts it there exactly
  // up to roundoff); every other eigenvalue must be strictly inside (-1, 1).
  int perron = 0;
  for (int i = 1; i < n; ++i)
    if (std::abs(eigs(i) - 1.0) < std::abs(eigs(perron) - 1.0)) perron = i;
  if (std::abs(eigs(perron) - 1.0) > 1e-9)
    throw AssumptionViolation(Kind::WeightSpectrum,
                              "no eigenvalue at 1 (closest is " +
                                  std::to_string(eigs(perron)) + ")");

  double gap = 0.0;
  for (int i = 0; i < n; ++i)
    if (i != perron) gap = std::max(gap, std::abs(eigs(i)));
  if (n > 1 && gap >= 1.0 - 1e-12)
    throw AssumptionViolation(
        Kind::WeightSpectrum,
        "non-Perron eigenvalue of modulus " + std::to_string(gap) +
            " (needs |d| < 1; is the graph connected?)");

  WeightMatrix out;
  out.entries = std::move(w);
  std::sort(eigs.data(), eigs.data() + n,
            [](double a, double b) { return std::abs(a) > std::abs(b); });
  out.spectrum = eigs;
  out.consensus_gap = gap;
  return out;
}

WeightMatrix laplacian_weights(const Graph& g) {
  using Kind = AssumptionViolation::Kind;
  const int n = g.n;
  if (n == 1) return validate_weight_matrix(Eigen::MatrixXd::Ones(1, 1), g);

  Eigen::MatrixXd laplacian = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [i, j] : g.edges) {
    laplacian(i, j) -= 1.0;
    laplacian(j, i) -= 1.0;
    laplacian(i, i) += 1.0;
    laplacian(j, j) += 1.0;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian);
  if (solver.info() != Eigen::Success)
    throw NumericError("laplacian_weights: eigendecomposition failed");
  const Eigen::VectorXd eigs = solver.eigenvalues();  // ascending
  const double lambda2 = eigs(1);
  const double lambda_n = eigs(n - 1);
  if (lambda2 < 1e-9 * std::max(1.0, lambda_n))
    throw AssumptionViolation(Kind::DisconnectedGraph,
                              "graph is not connected (lambda_2 ~ 0)");

  Eigen::MatrixXd w =
      Eigen::MatrixXd::Identity(n, n) - laplacian / (lambda2 + lambda_n);
  return validate_weight_matrix(std::move(w), g);
}

WeightMatrix metropolis_weights(const Graph& g) {
  using Kind = AssumptionViolation::Kind;
  if (g.n > 1 && !g.connected())
    throw AssumptionViolation(Kind::DisconnectedGraph,
                              "metropolis_weights: graph is not connected");

  const std::vector<int> deg = g.degrees();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(g.n, g.n);
  for (const auto& [i, j] : g.edges) {
    const double value =
        1.0 / (1.0 + std::max(deg[static_cast<std::size_t>(i)],
                              deg[static_cast<std::size_t>(j)]));
    w(i, j) = value;
    w(j, i) = value;
  }
  for (int i = 0; i < g.n; ++i) w(i, i) = 1.0 - w.row(i).sum();
  return validate_weight_matrix(std::move(w), g);
}

}  // namespace rcd
