#include <random>

#include "doctest.h"
#include "rcd/analysis.hpp"
#include "rcd/errors.hpp"
#include "rcd/montecarlo.hpp"
#include "rcd/serde.hpp"

using namespace rcd;

namespace {

ExperimentConfig small_config(std::uint64_t seed) {
  ExperimentConfig config;
  config.graph = erdos_renyi(6, 0.5, 3);
  config.weights = metropolis_weights(config.graph);
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> unif(-0.7, 0.7);
  for (int i = 0; i < 6; ++i)
    config.agents.push_back(
        {ArmaModel{{1.0}, {}, 1.0}, ArmaModel{{1.0}, {unif(rng)}, 3.0}});
  config.trials = 60;
  config.horizon = 50;
  config.seed = seed;
  config.record_stride = 10;
  return config;
}

}  // namespace

TEST_CASE("an effectively noise-free signal is never missed after the first step") {
  ExperimentConfig config;
  config.graph = Graph(1, {});
  config.weights = laplacian_weights(config.graph);
  config.agents = {{ArmaModel{{1.0}, {}, 1.0}, ArmaModel{{}, {}, 1e-6}}};
  config.trials = 100;
  config.horizon = 30;
  config.seed = 5;
  config.hypothesis = Hypothesis::SignalPlusNoise;
  config.record_stride = 10;

  const ErrorCurves curves = run_experiment(config);
  for (std::size_t s = 0; s < curves.recorded_steps.size(); ++s)
    CHECK(curves.miss_counts[s] == 0);
}

TEST_CASE("results are bit-identical across worker counts") {
  const ErrorCurves reference = run_experiment_serial(small_config(42));
  for (int workers : {1, 2, 4}) {
    ExperimentConfig config = small_config(42);
    config.workers = workers;
    const ErrorCurves curves = run_experiment(config);
    CHECK(curves.false_alarm_counts == reference.false_alarm_counts);
    CHECK(curves.miss_counts == reference.miss_counts);
    CHECK(curves.recorded_steps == reference.recorded_steps);
  }
}

TEST_CASE("the first-trial trace is identical under parallel execution") {
  ExperimentConfig config = small_config(9);
  config.record_trace = true;
  config.workers = 1;
  const ErrorCurves serial = run_experiment(config);
  config.workers = 4;
  const ErrorCurves parallel = run_experiment(config);
  REQUIRE(serial.trace.size() == parallel.trace.size());
  for (std::size_t i = 0; i < serial.trace.size(); ++i) {
    CHECK(serial.trace[i].statistic == parallel.trace[i].statistic);
    CHECK(serial.trace[i].decision == parallel.trace[i].decision);
  }
}

TEST_CASE("false-alarm and miss estimates coincide at gamma 0 in the floor regime") {
  ExperimentConfig config = small_config(13);
  config.trials = 4000;
  config.horizon = 120;
  config.hypothesis = Hypothesis::Both;
  const ErrorCurves curves = run_experiment(config);

  const int last = static_cast<int>(curves.recorded_steps.size()) - 1;
  for (int i = 0; i < config.num_agents(); ++i) {
    const double diff =
        std::abs(curves.p_false_alarm(last, i) - curves.p_miss(last, i));
    const double band = curves.false_alarm_half_width(last, i) +
                        curves.miss_half_width(last, i);
    CHECK(diff <= band);
  }
}

TEST_CASE("Wilson half-widths shrink like the square root of the trial count") {
  const double hw_small = wilson_half_width(250, 1000);
  const double hw_large = wilson_half_width(1000, 4000);
  CHECK(hw_small / hw_large == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("hypothesis selection controls which curves exist") {
  ExperimentConfig config = small_config(7);
  config.hypothesis = Hypothesis::NoiseOnly;
  const ErrorCurves h0 = run_experiment(config);
  CHECK(h0.has_false_alarm());
  CHECK_FALSE(h0.has_miss());

  config.hypothesis = Hypothesis::SignalPlusNoise;
  const ErrorCurves h1 = run_experiment(config);
  CHECK_FALSE(h1.has_false_alarm());
  CHECK(h1.has_miss());
}

TEST_CASE("model validation failures surface before any trial runs") {
  ExperimentConfig config = small_config(3);
  // Double pole at 0.5: 1 - w + 0.25 w^2 = (1 - 0.5 w)^2.
  config.agents[0].second = ArmaModel{{1.0, -0.25}, {}, 1.0};
  CHECK_THROWS_AS(run_experiment(config), AssumptionViolation);
}

TEST_CASE("muting every agent pins the statistic at zero") {
  ExperimentConfig config = small_config(21);
  config.hypothesis = Hypothesis::Both;
  for (int i = 0; i < config.num_agents(); ++i)
    config.zero_signal_agents.push_back(i);
  const ErrorCurves curves = run_experiment(config);

  // l = 0 >= gamma = 0 decides 1 everywhere: certain false alarm, no misses.
  for (std::size_t c = 0; c < curves.false_alarm_counts.size(); ++c) {
    CHECK(curves.false_alarm_counts[c] == static_cast<std::uint32_t>(config.trials));
    CHECK(curves.miss_counts[c] == 0);
  }
}

TEST_CASE("recorded steps follow the stride and always include the last step") {
  ExperimentConfig config = small_config(1);
  config.trials = 2;

  config.horizon = 25;
  config.record_stride = 10;
  CHECK(run_experiment(config).recorded_steps == std::vector<int>{9, 19, 24});

  config.horizon = 20;
  CHECK(run_experiment(config).recorded_steps == std::vector<int>{9, 19});

  config.horizon = 5;
  CHECK(run_experiment(config).recorded_steps == std::vector<int>{4});
}

TEST_CASE("moment check: first-step closed form under white noise") {
  ExperimentConfig config;
  config.graph = complete_graph(3);
  config.weights = metropolis_weights(config.graph);
  config.agents.assign(3, {ArmaModel{{1.0}, {}, 1.0}, ArmaModel{{}, {}, 2.0}});
  config.trials = 2000;
  config.horizon = 5;
  config.seed = 77;
  config.hypothesis = Hypothesis::SignalPlusNoise;

  const MomentCheckReport report = moment_check(config, {0, 4});
  // mu_i(0) = thetahat(0)^2 / 2 = (1/2)^2 / 2.
  CHECK(report.theory_mean(0, 0) == doctest::Approx(0.125));
  CHECK(report.max_abs_z < 4.0);
}

TEST_CASE("moment check needs a signal-present hypothesis and valid checkpoints") {
  ExperimentConfig config = small_config(2);
  config.hypothesis = Hypothesis::NoiseOnly;
  CHECK_THROWS_AS(moment_check(config, {1}), ArgumentError);
  config.hypothesis = Hypothesis::Both;
  CHECK_THROWS_AS(moment_check(config, {config.horizon}), ArgumentError);
}
