#include "rcd/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rcd/analysis.hpp"
#include "rcd/detector.hpp"
#include "rcd/errors.hpp"

namespace rcd {

namespace {

std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a + 0x9E3779B97F4A7C15ULL * (b + 1);
  s = (s ^ (s >> 30)) * 0xBF58476D1CE4E5B9ULL;
  s = (s ^ (s >> 27)) * 0x94D049BB133111EBULL;
  return s ^ (s >> 31);
}

std::uint64_t trial_seed(std::uint64_t base, int hypothesis_tag, int trial) {
  return mix64(mix64(base, static_cast<std::uint64_t>(hypothesis_tag)),
               static_cast<std::uint64_t>(trial));
}

int resolve_workers(int requested) {
#ifdef _OPENMP
  if (requested > 0) return requested;
  return omp_get_max_threads();
#else
  (void)requested;
  return 1;
#endif
}

std::vector<int> recorded_steps_for(int horizon, int stride) {
  std::vector<int> steps;
  for (int k = stride - 1; k < horizon; k += stride) steps.push_back(k);
  if (steps.empty() || steps.back() != horizon - 1) steps.push_back(horizon - 1);
  return steps;
}

std::vector<AgentChannel> make_channels(const ExperimentConfig& config) {
  std::vector<AgentChannel> channels;
  channels.reserve(config.agents.size());
  for (const auto& [signal, noise] : config.agents)
    channels.emplace_back(signal, noise);
  for (int i : config.zero_signal_agents) {
    if (i < 0 || i >= config.num_agents())
      throw ArgumentError("zero-signal agent index out of range");
    channels[static_cast<std::size_t>(i)].zero_signal = true;
  }
  return channels;
}

// One trial: synthesize noise from fresh Gaussian innovations, form the
// observations under the requested hypothesis, run the detector, and capture
// the statistics at the requested steps (flattened [capture_index][agent]).
void run_trial(const ExperimentConfig& config,
               const std::vector<std::vector<double>>& theta,
               bool signal_present, std::uint64_t rng_seed,
               const std::vector<int>& capture_steps,
               std::vector<double>& captured_l,
               std::vector<TraceRow>* trace) {
  const int n = config.num_agents();
  std::mt19937_64 rng(rng_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  DetectorState state(make_channels(config), config.weights, config.gamma);
  std::vector<FilterMemory> noise_memory;
  noise_memory.reserve(static_cast<std::size_t>(n));
  for (const auto& [signal, noise] : config.agents) noise_memory.emplace_back(noise);

  std::vector<double> y(static_cast<std::size_t>(n));
  std::size_t next_capture = 0;
  for (int k = 0; k < config.horizon; ++k) {
    for (int i = 0; i < n; ++i) {
      const double eps = gauss(rng);
      const double noise_sample = filter_step(config.agents[static_cast<std::size_t>(i)].second,
                                              noise_memory[static_cast<std::size_t>(i)], eps);
      y[static_cast<std::size_t>(i)] =
          signal_present
              ? theta[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] + noise_sample
              : noise_sample;
    }
    const std::vector<double>& l = state.advance(y);

    if (next_capture < capture_steps.size() && capture_steps[next_capture] == k) {
      for (int i = 0; i < n; ++i)
        captured_l[next_capture * static_cast<std::size_t>(n) +
                   static_cast<std::size_t>(i)] = l[static_cast<std::size_t>(i)];
      ++next_capture;
    }
    if (trace) {
      for (int i = 0; i < n; ++i)
        trace->push_back({k, i, l[static_cast<std::size_t>(i)],
                          l[static_cast<std::size_t>(i)] >= config.gamma ? 1 : 0});
    }
  }
}

// Runs all trials of one hypothesis and accumulates indicator counts of the
// corresponding error event. Integer accumulation keeps the result exact and
// order-independent, so the parallel and serial paths agree bit for bit.
void accumulate_counts(const ExperimentConfig& config,
                       const std::vector<std::vector<double>>& theta,
                       bool signal_present, int hypothesis_tag,
                       const std::vector<int>& recorded_steps,
                       std::vector<std::uint32_t>& counts,
                       std::vector<TraceRow>* trace, int workers) {
  const int n = config.num_agents();
  const std::size_t cells = recorded_steps.size() * static_cast<std::size_t>(n);
  counts.assign(cells, 0);

  auto count_one = [&](const std::vector<double>& captured,
                       std::vector<std::uint32_t>& sink) {
    for (std::size_t c = 0; c < cells; ++c) {
      const bool decided_one = captured[c] >= config.gamma;
      const bool error = signal_present ? !decided_one : decided_one;
      if (error) ++sink[c];
    }
  };

  const int first_parallel = trace ? 1 : 0;
  if (trace) {
    std::vector<double> captured(cells);
    run_trial(config, theta, signal_present, trial_seed(config.seed, hypothesis_tag, 0),
              recorded_steps, captured, trace);
    count_one(captured, counts);
  }

#ifdef _OPENMP
  if (workers > 1) {
#pragma omp parallel num_threads(workers)
    {
      std::vector<std::uint32_t> local(cells, 0);
      std::vector<double> captured(cells);
#pragma omp for schedule(dynamic, 16)
      for (int t = first_parallel; t < config.trials; ++t) {
        run_trial(config, theta, signal_present,
                  trial_seed(config.seed, hypothesis_tag, t), recorded_steps,
                  captured, nullptr);
        count_one(captured, local);
      }
#pragma omp critical
      {
        for (std::size_t c = 0; c < cells; ++c) counts[c] += local[c];
      }
    }
    return;
  }
#else
  (void)workers;
#endif

  std::vector<double> captured(cells);
  for (int t = first_parallel; t < config.trials; ++t) {
    run_trial(config, theta, signal_present, trial_seed(config.seed, hypothesis_tag, t),
              recorded_steps, captured, nullptr);
    count_one(captured, counts);
  }
}

void validate_config(const ExperimentConfig& config) {
  if (config.trials < 1) throw ArgumentError("run_experiment: trials must be >= 1");
  if (config.horizon < 1) throw ArgumentError("run_experiment: horizon must be >= 1");
  if (config.record_stride < 1)
    throw ArgumentError("run_experiment: record stride must be >= 1");
  if (config.num_agents() != config.weights.n())
    throw ArgumentError("run_experiment: agent count does not match the weight matrix");
  // Structural model validation; failures must surface before any trial runs.
  SpectralSummary::from_agents(config.agents);
}

std::vector<std::vector<double>> theta_traces(const ExperimentConfig& config) {
  std::vector<std::vector<double>> theta;
  theta.reserve(config.agents.size());
  for (const auto& [signal, noise] : config.agents)
    theta.push_back(impulse_response(signal, config.horizon).samples);
  return theta;
}

ErrorCurves run_with_workers(const ExperimentConfig& config, int workers) {
  validate_config(config);

  ErrorCurves curves;
  curves.trials = config.trials;
  curves.num_agents = config.num_agents();
  curves.recorded_steps = recorded_steps_for(config.horizon, config.record_stride);

  const auto theta = theta_traces(config);
  const bool want_h0 = config.hypothesis != Hypothesis::SignalPlusNoise;
  const bool want_h1 = config.hypothesis != Hypothesis::NoiseOnly;
  // The optional trace follows the signal-present runs when available.
  std::vector<TraceRow>* h1_trace =
      (config.record_trace && want_h1) ? &curves.trace : nullptr;
  std::vector<TraceRow>* h0_trace =
      (config.record_trace && !want_h1) ? &curves.trace : nullptr;

  if (want_h0)
    accumulate_counts(config, theta, /*signal_present=*/false, /*tag=*/0,
                      curves.recorded_steps, curves.false_alarm_counts, h0_trace,
                      workers);
  if (want_h1)
    accumulate_counts(config, theta, /*signal_present=*/true, /*tag=*/1,
                      curves.recorded_steps, curves.miss_counts, h1_trace, workers);
  return curves;
}

}  // namespace

double ErrorCurves::p_false_alarm(int step_index, int agent) const {
  return static_cast<double>(false_alarm_counts[static_cast<std::size_t>(step_index) *
                                                    static_cast<std::size_t>(num_agents) +
                                                static_cast<std::size_t>(agent)]) /
         trials;
}

double ErrorCurves::p_miss(int step_index, int agent) const {
  return static_cast<double>(miss_counts[static_cast<std::size_t>(step_index) *
                                             static_cast<std::size_t>(num_agents) +
                                         static_cast<std::size_t>(agent)]) /
         trials;
}

double ErrorCurves::false_alarm_half_width(int step_index, int agent) const {
  return wilson_half_width(
      false_alarm_counts[static_cast<std::size_t>(step_index) *
                             static_cast<std::size_t>(num_agents) +
                         static_cast<std::size_t>(agent)],
      trials);
}

double ErrorCurves::miss_half_width(int step_index, int agent) const {
  return wilson_half_width(miss_counts[static_cast<std::size_t>(step_index) *
                                           static_cast<std::size_t>(num_agents) +
                                       static_cast<std::size_t>(agent)],
                           trials);
}

double wilson_half_width(std::uint32_t successes, int trials) {
  constexpr double z = 1.959963984540054;  // 95%
  const double t = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / t;
  const double z2 = z * z;
  return z * std::sqrt(p * (1.0 - p) / t + z2 / (4.0 * t * t)) / (1.0 + z2 / t);
}

ErrorCurves run_experiment(const ExperimentConfig& config) {
  return run_with_workers(config, resolve_workers(config.workers));
}

ErrorCurves run_experiment_serial(const ExperimentConfig& config) {
  return run_with_workers(config, 1);
}

MomentCheckReport moment_check(const ExperimentConfig& config,
                               const std::vector<int>& checkpoints) {
  if (config.hypothesis == Hypothesis::NoiseOnly)
    throw ArgumentError("moment_check: requires the signal-present hypothesis");
  if (checkpoints.empty()) throw ArgumentError("moment_check: no checkpoints");
  validate_config(config);

  std::vector<int> steps = checkpoints;
  std::sort(steps.begin(), steps.end());
  for (int k : steps)
    if (k < 0 || k >= config.horizon)
      throw ArgumentError("moment_check: checkpoint outside the horizon");

  const int n = config.num_agents();
  const std::size_t cells = steps.size() * static_cast<std::size_t>(n);
  const auto theta = theta_traces(config);

  // Per-trial statistics land in disjoint slots; the reduction below runs in
  // trial order so the report does not depend on the thread count.
  std::vector<double> samples(static_cast<std::size_t>(config.trials) * cells);
  const int workers = resolve_workers(config.workers);
#ifdef _OPENMP
#pragma omp parallel num_threads(workers)
  {
    std::vector<double> captured(cells);
#pragma omp for schedule(dynamic, 16)
    for (int t = 0; t < config.trials; ++t) {
      run_trial(config, theta, /*signal_present=*/true,
                trial_seed(config.seed, 1, t), steps, captured, nullptr);
      std::copy(captured.begin(), captured.end(),
                samples.begin() + static_cast<std::ptrdiff_t>(t * cells));
    }
  }
#else
  {
    std::vector<double> captured(cells);
    for (int t = 0; t < config.trials; ++t) {
      run_trial(config, theta, true, trial_seed(config.seed, 1, t), steps, captured,
                nullptr);
      std::copy(captured.begin(), captured.end(),
                samples.begin() + static_cast<std::ptrdiff_t>(t * cells));
    }
  }
#endif

  const MomentTrace trace =
      moment_trace(config.agents, config.weights, config.horizon, false,
                   config.zero_signal_agents);

  MomentCheckReport report;
  report.checkpoints = steps;
  const int rows = static_cast<int>(steps.size());
  report.mean_z.resize(rows, n);
  report.variance_z.resize(rows, n);
  report.empirical_mean.resize(rows, n);
  report.theory_mean.resize(rows, n);
  report.empirical_variance.resize(rows, n);
  report.theory_variance.resize(rows, n);

  const double t = static_cast<double>(config.trials);
  for (int s = 0; s < rows; ++s) {
    for (int i = 0; i < n; ++i) {
      double sum = 0.0, sum_sq = 0.0;
      for (int trial = 0; trial < config.trials; ++trial) {
        const double v = samples[static_cast<std::size_t>(trial) * cells +
                                 static_cast<std::size_t>(s) * static_cast<std::size_t>(n) +
                                 static_cast<std::size_t>(i)];
        sum += v;
        sum_sq += v * v;
      }
      const double mean = sum / t;
      const double var = (sum_sq - t * mean * mean) / (t - 1.0);
      const double mu = trace.mean[static_cast<std::size_t>(steps[static_cast<std::size_t>(s)])](i);
      const double omega =
          trace.variance[static_cast<std::size_t>(steps[static_cast<std::size_t>(s)])](i);

      report.empirical_mean(s, i) = mean;
      report.theory_mean(s, i) = mu;
      report.empirical_variance(s, i) = var;
      report.theory_variance(s, i) = omega;
      report.mean_z(s, i) = (mean - mu) / std::sqrt(omega / t);
      report.variance_z(s, i) = (var - omega) / (omega * std::sqrt(2.0 / (t - 1.0)));
    }
  }
  report.max_abs_z = std::max(report.mean_z.cwiseAbs().maxCoeff(),
                              report.variance_z.cwiseAbs().maxCoeff());
  return report;
}

void write_curves_csv(std::ostream& out, const ErrorCurves& curves) {
  out << "k,agent";
  if (curves.has_false_alarm()) out << ",p_false_alarm";
  if (curves.has_miss()) out << ",p_miss";
  out << ",ci_half_width\n";

  const int precision = 10;
  out.precision(precision);
  for (std::size_t s = 0; s < curves.recorded_steps.size(); ++s) {
    for (int i = 0; i < curves.num_agents; ++i) {
      out << curves.recorded_steps[s] << ',' << (i + 1);
      double hw = 0.0;
      if (curves.has_false_alarm()) {
        out << ',' << curves.p_false_alarm(static_cast<int>(s), i);
        hw = std::max(hw, curves.false_alarm_half_width(static_cast<int>(s), i));
      }
      if (curves.has_miss()) {
        out << ',' << curves.p_miss(static_cast<int>(s), i);
        hw = std::max(hw, curves.miss_half_width(static_cast<int>(s), i));
      }
      out << ',' << hw << '\n';
    }
  }
}

}  // namespace rcd
