#include "rcd/analysis.hpp"

#include <cmath>

#include "rcd/errors.hpp"
#include "rcd/whitening.hpp"

namespace rcd {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;  // log(2*pi)/2

}  // namespace

double q_function(double t) {
  if (!std::isfinite(t)) throw ArgumentError("q_function: non-finite argument");
  return 0.5 * std::erfc(t / std::sqrt(2.0));
}

double log_q_function(double t) {
  if (!std::isfinite(t)) throw ArgumentError("log_q_function: non-finite argument");
  if (t < 30.0) return std::log(q_function(t));
  // Tail expansion Q(t) = phi(t)/t * (1 - 1/t^2 + 3/t^4 - 15/t^6 + ...);
  // at t = 30 the truncation is far below double precision of the log.
  const double t2 = t * t;
  const double series = 1.0 - 1.0 / t2 + 3.0 / (t2 * t2) - 15.0 / (t2 * t2 * t2);
  return -0.5 * t2 - kHalfLog2Pi - std::log(t) + std::log(series);
}

SpectralSummary SpectralSummary::from_agents(
    const std::vector<std::pair<ArmaModel, ArmaModel>>& agents) {
  SpectralSummary s;
  s.per_agent.reserve(agents.size());
  s.rho_per_agent.reserve(agents.size());
  for (const auto& [signal, noise] : agents) {
    RationalTransferFunction f =
        partial_fractions(whitened_signal_transfer(signal, noise));
    s.rho_per_agent.push_back(f.rho());
    s.rho = std::max(s.rho, f.rho());
    s.per_agent.push_back(std::move(f));
  }
  return s;
}

std::pair<RhoCase, double> asymptotic_energy(const RationalTransferFunction& f) {
  check_pole_zero_assumptions(f);
  if (f.residues.size() != f.poles.size())
    throw ArgumentError("asymptotic_energy: residues not populated");

  const double rho = f.rho();
  if (std::abs(rho - 1.0) < PoleZeroTolerances::unit_pole) {
    const std::size_t dom = f.dominant_pole_index();
    return {RhoCase::Unit, std::norm(f.residues[dom])};
  }

  std::complex<double> alpha(0.0, 0.0);
  for (std::size_t j = 0; j < f.poles.size(); ++j)
    for (std::size_t l = 0; l < f.poles.size(); ++l)
      alpha += f.residues[j] * std::conj(f.residues[l]) /
               (1.0 - f.poles[j] * std::conj(f.poles[l]));
  if (std::abs(alpha.imag()) > 1e-10 * std::max(1.0, std::abs(alpha.real())))
    throw NumericError("asymptotic_energy: energy sum came out complex");
  return {RhoCase::Subunit, alpha.real()};
}

AsymptoticReport classify(const SpectralSummary& summary, int num_agents,
                          double gamma) {
  if (static_cast<int>(summary.per_agent.size()) != num_agents)
    throw ArgumentError("classify: summary size does not match agent count");

  AsymptoticReport report;
  report.gamma = gamma;
  report.num_agents = num_agents;
  report.rho = summary.rho;

  const bool unit_rho = std::abs(summary.rho - 1.0) < PoleZeroTolerances::unit_pole;
  double alpha = 0.0;
  for (int i = 0; i < num_agents; ++i) {
    const auto [rho_case, energy] =
        asymptotic_energy(summary.per_agent[static_cast<std::size_t>(i)]);
    if (unit_rho) {
      if (rho_case == RhoCase::Unit) {
        alpha += energy;
        report.informative_agents.push_back(i);
      }
    } else {
      alpha += energy;
      report.informative_agents.push_back(i);
    }
  }
  if (!(alpha > 0.0))
    throw NumericError(
        "classify: degenerate problem, whitened signal carries no energy");
  report.alpha = alpha;

  if (unit_rho) {
    report.regime = Regime::ExponentialDecay;
    report.beta_false_alarm = alpha / 8.0;
    report.beta_miss = alpha / 8.0;
  } else {
    report.regime = Regime::ErrorFloor;
    const double root = std::sqrt(alpha);
    const double arg_f = root / 2.0 + gamma * num_agents / root;
    const double arg_m = root / 2.0 - gamma * num_agents / root;
    report.beta_false_alarm = -log_q_function(arg_f);
    report.beta_miss = -log_q_function(arg_m);
    report.floor_false_alarm = std::exp(-report.beta_false_alarm);
    report.floor_miss = std::exp(-report.beta_miss);
    report.miss_floor_above_half = *report.floor_miss > 0.5;
  }
  return report;
}

MomentTrace moment_trace(const std::vector<std::pair<ArmaModel, ArmaModel>>& agents,
                         const WeightMatrix& weights, int horizon,
                         bool keep_final_covariance,
                         const std::vector<int>& zero_signal_agents) {
  const int n = static_cast<int>(agents.size());
  if (n != weights.n())
    throw ArgumentError("moment_trace: agent count does not match weights");
  if (horizon < 1) throw ArgumentError("moment_trace: horizon must be >= 1");

  std::vector<bool> zero_signal(static_cast<std::size_t>(n), false);
  for (int i : zero_signal_agents) {
    if (i < 0 || i >= n)
      throw ArgumentError("moment_trace: zero-signal agent index out of range");
    zero_signal[static_cast<std::size_t>(i)] = true;
  }

  std::vector<WhiteningState> whiteners;
  std::vector<FilterMemory> signal_memory;
  whiteners.reserve(static_cast<std::size_t>(n));
  signal_memory.reserve(static_cast<std::size_t>(n));
  for (const auto& [signal, noise] : agents) {
    whiteners.emplace_back(noise);
    signal_memory.emplace_back(signal);
  }

  MomentTrace trace;
  trace.mean.reserve(static_cast<std::size_t>(horizon));
  trace.variance.reserve(static_cast<std::size_t>(horizon));

  Eigen::VectorXd mu = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < horizon; ++k) {
    Eigen::VectorXd theta_hat_sq(n);
    for (int i = 0; i < n; ++i) {
      const double theta = filter_step(agents[static_cast<std::size_t>(i)].first,
                                       signal_memory[static_cast<std::size_t>(i)],
                                       k == 0 ? 1.0 : 0.0);
      const double theta_hat = whiteners[static_cast<std::size_t>(i)].step(theta);
      theta_hat_sq(i) = zero_signal[static_cast<std::size_t>(i)] ? 0.0 : theta_hat * theta_hat;
    }
    mu = weights.entries * mu + 0.5 * theta_hat_sq;
    omega = weights.entries * omega * weights.entries.transpose();
    omega.diagonal() += theta_hat_sq;
    trace.mean.push_back(mu);
    trace.variance.push_back(omega.diagonal());
  }
  if (keep_final_covariance) trace.final_covariance = omega;
  return trace;
}

std::string to_string(Regime regime) {
  return regime == Regime::ExponentialDecay ? "a" : "b";
}

}  // namespace rcd
