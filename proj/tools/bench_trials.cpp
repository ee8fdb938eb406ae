// Compares the serial reference trial loop against the OpenMP kernel on a
// medium-size experiment and checks they produce identical counts.

#include <chrono>
#include <cstdio>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rcd/montecarlo.hpp"
#include "rcd/network.hpp"

namespace {

rcd::ExperimentConfig bench_config(int trials, int horizon) {
  rcd::ExperimentConfig config;
  config.graph = rcd::erdos_renyi(20, 0.3, 7);
  config.weights = rcd::laplacian_weights(config.graph);

  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> unif(-0.8, 0.8);
  for (int i = 0; i < 20; ++i) {
    rcd::ArmaModel signal{{1.0}, {}, 1.0};
    rcd::ArmaModel noise{{1.0}, {unif(rng)}, 5.0};
    config.agents.emplace_back(signal, noise);
  }
  config.trials = trials;
  config.horizon = horizon;
  config.seed = 42;
  config.hypothesis = rcd::Hypothesis::SignalPlusNoise;
  config.record_stride = 10;
  return config;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  int trials = 4000;
  int horizon = 200;
  if (argc > 1) trials = std::atoi(argv[1]);
  if (argc > 2) horizon = std::atoi(argv[2]);

  rcd::ExperimentConfig config = bench_config(trials, horizon);

  config.workers = 1;
  auto t0 = std::chrono::steady_clock::now();
  const rcd::ErrorCurves serial = rcd::run_experiment_serial(config);
  const double serial_s = seconds_since(t0);

  config.workers = 0;  // all hardware threads
  t0 = std::chrono::steady_clock::now();
  const rcd::ErrorCurves parallel = rcd::run_experiment(config);
  const double parallel_s = seconds_since(t0);

  const bool identical = serial.miss_counts == parallel.miss_counts &&
                         serial.false_alarm_counts == parallel.false_alarm_counts;

  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  std::printf("trials=%d horizon=%d agents=%d\n", trials, horizon,
              config.num_agents());
  std::printf("serial:   %8.3f s  (%.0f trials/s)\n", serial_s, trials / serial_s);
  std::printf("parallel: %8.3f s  (%.0f trials/s, %d threads)\n", parallel_s,
              trials / parallel_s, threads);
  std::printf("speedup:  %.2fx\n", serial_s / parallel_s);
  std::printf("counts identical: %s\n", identical ? "yes" : "NO");
  return identical ? 0 : 1;
}
