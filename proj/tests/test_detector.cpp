#include <random>

#include "doctest.h"
#include "rcd/detector.hpp"
#include "rcd/errors.hpp"
#include "support.hpp"

using namespace rcd;

namespace {

std::vector<AgentChannel> channels_for(
    const std::vector<std::pair<ArmaModel, ArmaModel>>& models) {
  std::vector<AgentChannel> channels;
  for (const auto& [s, n] : models) channels.emplace_back(s, n);
  return channels;
}

// Whitened histories via one triangular solve; components are stable under
// extension, so the prefix at every k <= dim-1 comes for free.
void dense_whitened(const ArmaModel& signal, const ArmaModel& noise,
                    const Eigen::VectorXd& y, Eigen::VectorXd& theta_hat,
                    Eigen::VectorXd& y_hat) {
  const int dim = static_cast<int>(y.size());
  const Eigen::MatrixXd l = cholesky_factor(factors_for_dimension(noise, dim));
  Eigen::VectorXd theta(dim);
  const SignalTrace trace = impulse_response(signal, dim);
  for (int k = 0; k < dim; ++k) theta(k) = trace.samples[k];
  theta_hat = oracle::forward_substitution(l, theta);
  y_hat = oracle::forward_substitution(l, y);
}

}  // namespace

TEST_CASE("first innovation under white noise is the direct substitution") {
  const double amplitude = 1.0, sigma = 2.0, y = 0.7;
  AgentChannel channel(ArmaModel{{1.0}, {}, amplitude}, ArmaModel{{}, {}, sigma});
  const double eta = innovation(channel, y);
  const double expected =
      (amplitude / sigma) * (y / sigma) - amplitude * amplitude / (2 * sigma * sigma);
  CHECK(eta == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("noise-free observations give nonnegative innovations") {
  const ArmaModel signal{{0.6}, {0.2}, 1.4};
  const ArmaModel noise{{0.5}, {0.3}, 1.1};
  AgentChannel channel(signal, noise);
  const SignalTrace theta = impulse_response(signal, 60);

  WhiteningState reference(noise);
  for (int k = 0; k < 60; ++k) {
    const double theta_hat = reference.step(theta.samples[k]);
    const double eta = innovation(channel, theta.samples[k]);
    CHECK(eta == doctest::Approx(0.5 * theta_hat * theta_hat).epsilon(1e-12));
    CHECK(eta >= 0.0);
  }
}

TEST_CASE("cumulative innovations equal the dense inner products") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> gauss;
  const ArmaModel signal{{0.7}, {0.1}, 1.0};
  const ArmaModel noise{{0.4}, {-0.3}, 1.5};

  const int dim = 101;
  Eigen::VectorXd y(dim);
  for (int k = 0; k < dim; ++k) y(k) = gauss(rng);

  Eigen::VectorXd theta_hat, y_hat;
  dense_whitened(signal, noise, y, theta_hat, y_hat);

  AgentChannel channel(signal, noise);
  double cumulative = 0.0;
  double dense = 0.0;
  for (int k = 0; k < dim; ++k) {
    cumulative += innovation(channel, y(k));
    dense += theta_hat(k) * y_hat(k) - 0.5 * theta_hat(k) * theta_hat(k);
    CHECK(std::abs(cumulative - dense) <= 1e-8 * std::max(1.0, std::abs(dense)));
  }
}

TEST_CASE("single-agent detector reproduces the centralized log-likelihood") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> gauss;
  const ArmaModel signal{{1.0}, {}, 1.0};
  const ArmaModel noise{{0.8}, {0.25}, 2.0};
  const std::vector<std::pair<ArmaModel, ArmaModel>> models{{signal, noise}};

  const WeightMatrix w = laplacian_weights(complete_graph(1));
  DetectorState state(channels_for(models), w, 0.0);

  SignalTrace observations;
  observations.samples.reserve(60);
  std::vector<double> streaming;
  for (int k = 0; k < 60; ++k) {
    const double y = gauss(rng);
    observations.samples.push_back(y);
    const DecisionRecord record = state.step(std::vector<double>{y});
    streaming.push_back(record.statistics[0]);
  }

  for (int k : {0, 10, 25, 59}) {
    const std::vector<double> reference = centralized_llr(models, {observations}, k);
    CHECK(std::abs(streaming[k] - reference[0]) <=
          1e-8 * std::max(1.0, std::abs(reference[0])));
  }
}

TEST_CASE("zero observations drain the statistic by a constant per step") {
  const double amplitude = 1.0, sigma = 2.0;
  std::vector<std::pair<ArmaModel, ArmaModel>> models(
      4, {ArmaModel{{1.0}, {}, amplitude}, ArmaModel{{}, {}, sigma}});
  const WeightMatrix w = metropolis_weights(complete_graph(4));
  DetectorState state(channels_for(models), w, 0.0);

  const double drop = amplitude * amplitude / (2 * sigma * sigma);
  const std::vector<double> zeros(4, 0.0);
  for (int k = 0; k < 20; ++k) {
    const DecisionRecord record = state.step(zeros);
    for (int i = 0; i < 4; ++i) {
      CHECK(record.statistics[i] == doctest::Approx(-(k + 1) * drop).epsilon(1e-12));
      CHECK(record.decisions[i] == 0);
    }
  }
}

TEST_CASE("three-agent path matches the dense unrolled recursion") {
  std::mt19937_64 rng(29);
  std::normal_distribution<double> gauss;
  std::vector<std::pair<ArmaModel, ArmaModel>> models;
  for (int i = 0; i < 3; ++i)
    models.push_back({ArmaModel{{0.5 + 0.1 * i}, {0.2}, 1.0},
                      ArmaModel{{0.3 - 0.1 * i}, {0.1 + 0.2 * i}, 1.0 + 0.5 * i}});

  const WeightMatrix w = metropolis_weights(path_graph(3));
  DetectorState state(channels_for(models), w, 0.0);

  const int horizon = 50;
  Eigen::MatrixXd eta(3, horizon);
  for (int i = 0; i < 3; ++i) {
    Eigen::VectorXd y(horizon);
    std::mt19937_64 agent_rng(100 + static_cast<std::uint64_t>(i));
    std::normal_distribution<double> agent_gauss;
    for (int k = 0; k < horizon; ++k) y(k) = agent_gauss(agent_rng);

    Eigen::VectorXd theta_hat, y_hat;
    dense_whitened(models[i].first, models[i].second, y, theta_hat, y_hat);
    for (int k = 0; k < horizon; ++k)
      eta(i, k) = theta_hat(k) * y_hat(k) - 0.5 * theta_hat(k) * theta_hat(k);
  }

  // Recompute the same observation streams in the detector's step order.
  std::vector<std::mt19937_64> rngs;
  for (int i = 0; i < 3; ++i) rngs.emplace_back(100 + static_cast<std::uint64_t>(i));
  std::vector<std::normal_distribution<double>> dists(3);

  Eigen::VectorXd l_dense = Eigen::VectorXd::Zero(3);
  for (int k = 0; k < horizon; ++k) {
    std::vector<double> y(3);
    for (int i = 0; i < 3; ++i) y[i] = dists[i](rngs[i]);
    const DecisionRecord record = state.step(y);

    l_dense = w.entries * l_dense + eta.col(k);
    for (int i = 0; i < 3; ++i)
      CHECK(std::abs(record.statistics[i] - l_dense(i)) <=
            1e-8 * std::max(1.0, std::abs(l_dense(i))));
  }
}

TEST_CASE("muted channels contribute exactly zero innovations") {
  const ArmaModel signal{{1.0}, {}, 1.0};
  const ArmaModel noise{{}, {}, 1.0};
  AgentChannel channel(signal, noise);
  channel.zero_signal = true;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss;
  for (int k = 0; k < 10; ++k) CHECK(innovation(channel, gauss(rng)) == 0.0);
}

TEST_CASE("centralized statistic under white noise is the matched filter") {
  const double amplitude = 0.8, sigma = 1.5;
  const std::vector<std::pair<ArmaModel, ArmaModel>> models{
      {ArmaModel{{1.0}, {}, amplitude}, ArmaModel{{}, {}, sigma}}};
  SignalTrace obs;
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss;
  double running = 0.0;
  for (int k = 0; k < 30; ++k) {
    obs.samples.push_back(gauss(rng));
    running += obs.samples.back();
  }
  const std::vector<double> l = centralized_llr(models, {obs}, 29);
  const double expected = amplitude / (sigma * sigma) * running -
                          30.0 * amplitude * amplitude / (2.0 * sigma * sigma);
  CHECK(l[0] == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("raising the threshold never flips a decision to one") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> gauss;
  std::vector<std::pair<ArmaModel, ArmaModel>> models(
      3, {ArmaModel{{1.0}, {}, 1.0}, ArmaModel{{0.4}, {0.2}, 1.0}});
  const WeightMatrix w = metropolis_weights(path_graph(3));

  // Statistics do not depend on gamma, so one run gives every threshold.
  DetectorState state(channels_for(models), w, 0.0);
  std::vector<std::vector<double>> trace;
  for (int k = 0; k < 40; ++k) {
    std::vector<double> y(3);
    for (double& v : y) v = gauss(rng);
    trace.push_back(state.step(y).statistics);
  }
  const double gammas[] = {-1.0, -0.1, 0.0, 0.1, 1.0};
  for (const auto& l : trace)
    for (std::size_t g = 1; g < 5; ++g)
      for (int i = 0; i < 3; ++i) {
        const int low = l[i] >= gammas[g - 1] ? 1 : 0;
        const int high = l[i] >= gammas[g] ? 1 : 0;
        CHECK(high <= low);
      }
}

TEST_CASE("observation vectors of the wrong length are rejected") {
  std::vector<std::pair<ArmaModel, ArmaModel>> models(
      2, {ArmaModel{{1.0}, {}, 1.0}, ArmaModel{{}, {}, 1.0}});
  DetectorState state(channels_for(models), metropolis_weights(complete_graph(2)), 0.0);
  CHECK_THROWS_AS(state.step(std::vector<double>{1.0}), ArgumentError);
}

TEST_CASE("channel whitener memory does not grow with time") {
  AgentChannel channel(ArmaModel{{1.0}, {}, 1.0}, ArmaModel{{0.5, 0.1}, {0.2}, 1.0});
  const std::size_t before = channel.obs_whitener.memory_size();
  std::mt19937_64 rng(13);
  std::normal_distribution<double> gauss;
  for (int k = 0; k < 20000; ++k) innovation(channel, gauss(rng));
  CHECK(channel.obs_whitener.memory_size() == before);
  CHECK(channel.signal_whitener.memory_size() == before);
}
