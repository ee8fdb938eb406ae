#ifndef RCD_MONTECARLO_HPP
#define RCD_MONTECARLO_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "rcd/arma.hpp"
#include "rcd/network.hpp"

namespace rcd {

enum class Hypothesis { NoiseOnly, SignalPlusNoise, Both };

/// Everything a seeded run needs. `agents` pairs (signal model, noise model);
/// agent i of the models list sits on node i of the graph.
struct ExperimentConfig {
  std::vector<std::pair<ArmaModel, ArmaModel>> agents;
  Graph graph;
  WeightMatrix weights;
  double gamma = 0.0;
  int horizon = 100;
  int trials = 1000;
  std::uint64_t seed = 0;
  Hypothesis hypothesis = Hypothesis::Both;
  int record_stride = 10;
  std::vector<int> zero_signal_agents;  // 0-based ablation list
  int workers = 0;                      // 0 = all hardware threads, 1 = serial
  bool record_trace = false;            // per-step (k, agent, l, D) of trial 0

  int num_agents() const { return static_cast<int>(agents.size()); }
};

struct TraceRow {
  int k;
  int agent;  // 0-based
  double statistic;
  int decision;
};

/// Empirical error probabilities at the recorded steps. Counts are the
/// ground truth (integer, exactly reproducible); estimates and Wilson
/// half-widths are derived views.
struct ErrorCurves {
  std::vector<int> recorded_steps;
  int trials = 0;
  // Flattened [step_index * num_agents + agent].
  std::vector<std::uint32_t> false_alarm_counts;  // filled by noise-only runs
  std::vector<std::uint32_t> miss_counts;         // filled by signal runs
  int num_agents = 0;
  std::vector<TraceRow> trace;  // only when requested

  bool has_false_alarm() const { return !false_alarm_counts.empty(); }
  bool has_miss() const { return !miss_counts.empty(); }
  double p_false_alarm(int step_index, int agent) const;
  double p_miss(int step_index, int agent) const;
  double false_alarm_half_width(int step_index, int agent) const;
  double miss_half_width(int step_index, int agent) const;
};

/// Wilson score interval half-width at 95% for s successes out of t.
double wilson_half_width(std::uint32_t successes, int trials);

/// Seeded Monte Carlo estimate of the error curves. Model assumptions are
/// validated before any trial runs. Results are bit-identical for a given
/// (seed, config) regardless of worker count: every trial owns an RNG stream
/// derived from (seed, hypothesis, trial index) and accumulation is integer.
ErrorCurves run_experiment(const ExperimentConfig& config);

/// Single-threaded reference implementation; run_experiment with workers > 1
/// must reproduce it exactly.
ErrorCurves run_experiment_serial(const ExperimentConfig& config);

/// Trial-averaged mean and per-agent variance of l(k) against the exact
/// moment recursion, as z-scores.
struct MomentCheckReport {
  std::vector<int> checkpoints;
  Eigen::MatrixXd mean_z;  // rows: checkpoints, cols: agents
  Eigen::MatrixXd variance_z;
  Eigen::MatrixXd empirical_mean, theory_mean;
  Eigen::MatrixXd empirical_variance, theory_variance;
  double max_abs_z = 0.0;
};

MomentCheckReport moment_check(const ExperimentConfig& config,
                               const std::vector<int>& checkpoints);

/// Tidy CSV: k, agent (1-based), the estimates present under the configured
/// hypothesis, and a shared conservative ci_half_width column.
void write_curves_csv(std::ostream& out, const ErrorCurves& curves);

}  // namespace rcd

#endif  // RCD_MONTECARLO_HPP
