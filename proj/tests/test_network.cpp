#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "rcd/errors.hpp"
#include "rcd/network.hpp"

using namespace rcd;

TEST_CASE("a single node is trivially connected") {
  const Graph g = erdos_renyi(1, 0.5, 3);
  CHECK(g.n == 1);
  CHECK(g.connected());
}

TEST_CASE("p = 1 gives the complete graph") {
  const Graph g = erdos_renyi(5, 1.0, 3);
  CHECK(g.edges.size() == 10);
  CHECK(g.connected());
}

TEST_CASE("the 40-node sample at p = 2 log(40)/40 is connected") {
  const double p = 2.0 * std::log(40.0) / 40.0;
  const Graph g = erdos_renyi(40, p, 1);
  CHECK(g.connected());
  CHECK(g.edges.size() > 80);  // expected count ~ 144, sample-dependent
}

TEST_CASE("the generator gives up when connectivity is unreachable") {
  CHECK_THROWS_WITH_AS(erdos_renyi(3, 0.0, 1), doctest::Contains("increase"),
                       GenerationError);
}

TEST_CASE("Laplacian weights on two nodes are a hand computation") {
  const WeightMatrix w = laplacian_weights(complete_graph(2));
  CHECK(w.entries(0, 0) == doctest::Approx(0.75));
  CHECK(w.entries(0, 1) == doctest::Approx(0.25));
  CHECK(w.entries(1, 0) == doctest::Approx(0.25));
  CHECK(w.entries(1, 1) == doctest::Approx(0.75));
}

TEST_CASE("Laplacian weights on a path are doubly stochastic with gap below one") {
  const WeightMatrix w = laplacian_weights(path_graph(3));
  for (int i = 0; i < 3; ++i) {
    CHECK(w.entries.row(i).sum() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(w.entries.col(i).sum() == doctest::Approx(1.0).epsilon(1e-13));
  }
  CHECK(w.consensus_gap < 1.0);
  CHECK(w.consensus_gap > 0.0);
}

TEST_CASE("the 40-node experiment graph has consensus gap below one") {
  const double p = 2.0 * std::log(40.0) / 40.0;
  const WeightMatrix w = laplacian_weights(erdos_renyi(40, p, 1));
  CHECK(w.consensus_gap < 1.0);
}

TEST_CASE("Metropolis weights on one edge split evenly") {
  const WeightMatrix w = metropolis_weights(complete_graph(2));
  CHECK(w.entries(0, 0) == doctest::Approx(0.5));
  CHECK(w.entries(0, 1) == doctest::Approx(0.5));
}

TEST_CASE("Metropolis weights on a star use the hub degree") {
  const WeightMatrix w = metropolis_weights(star_graph(4));
  for (int leaf = 1; leaf < 4; ++leaf)
    CHECK(w.entries(0, leaf) == doctest::Approx(0.25));
  CHECK(w.entries(0, 0) == doctest::Approx(0.25));
  for (int i = 0; i < 4; ++i)
    CHECK(w.entries.row(i).sum() == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("random connected graphs produce valid spectra under both rules") {
  std::mt19937_64 seeds(8);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + static_cast<int>(seeds() % 12);
    const Graph g = erdos_renyi(n, 0.7, seeds());
    const WeightMatrix wl = laplacian_weights(g);
    const WeightMatrix wm = metropolis_weights(g);
    CHECK(wl.consensus_gap < 1.0);
    CHECK(wm.consensus_gap < 1.0);
  }
}

TEST_CASE("powers of W converge to the averaging matrix at the gap rate") {
  for (const Graph& g : {path_graph(3), complete_graph(5), erdos_renyi(8, 0.6, 4)}) {
    const WeightMatrix w = laplacian_weights(g);
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(g.n, g.n);
    for (int k = 0; k < 200; ++k) power = power * w.entries;
    const Eigen::MatrixXd averaging =
        Eigen::MatrixXd::Constant(g.n, g.n, 1.0 / g.n);
    CHECK((power - averaging).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("Kronecker square spectrum is the product set and stays inside the disk") {
  const Graph g = erdos_renyi(6, 0.7, 10);
  const WeightMatrix w = metropolis_weights(g);
  const int n = g.n;

  Eigen::MatrixXd kron(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      kron.block(i * n, j * n, n, n) = w.entries(i, j) * w.entries;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(kron);
  std::vector<double> kron_moduli(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n * n; ++i) kron_moduli[i] = std::abs(solver.eigenvalues()(i));

  std::vector<double> products;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      products.push_back(std::abs(w.spectrum(i) * w.spectrum(j)));

  std::sort(kron_moduli.begin(), kron_moduli.end());
  std::sort(products.begin(), products.end());
  for (std::size_t i = 0; i < products.size(); ++i)
    CHECK(kron_moduli[i] == doctest::Approx(products[i]).epsilon(1e-9));

  // Exactly one eigenvalue at 1; all other moduli strictly inside the disk.
  CHECK(kron_moduli.back() == doctest::Approx(1.0));
  CHECK(kron_moduli[kron_moduli.size() - 2] < 1.0);
}

TEST_CASE("disconnected graphs are rejected by both weight rules") {
  const Graph g(4, {{0, 1}, {2, 3}});
  CHECK_THROWS_AS(laplacian_weights(g), AssumptionViolation);
  CHECK_THROWS_AS(metropolis_weights(g), AssumptionViolation);
}

TEST_CASE("weight validation rejects sparsity that ignores the graph") {
  const Graph g = path_graph(3);
  Eigen::MatrixXd w(3, 3);
  // Doubly stochastic but with a nonzero entry across the missing (0,2) edge.
  w << 0.5, 0.25, 0.25, 0.25, 0.5, 0.25, 0.25, 0.25, 0.5;
  CHECK_THROWS_AS(validate_weight_matrix(w, g), AssumptionViolation);
}

TEST_CASE("graphs reject self-loops and out-of-range endpoints") {
  CHECK_THROWS_AS(Graph(3, {{1, 1}}), ArgumentError);
  CHECK_THROWS_AS(Graph(3, {{0, 7}}), ArgumentError);
}
