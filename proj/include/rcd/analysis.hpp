#ifndef RCD_ANALYSIS_HPP
#define RCD_ANALYSIS_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rcd/arma.hpp"
#include "rcd/network.hpp"
#include "rcd/transfer.hpp"

namespace rcd {

/// Standard Gaussian tail probability Q(t).
double q_function(double t);

/// log Q(t), stable far into the tail where Q underflows.
double log_q_function(double t);

/// Per-agent whitened-signal transfer functions with residues, their pole
/// radii and the network-wide maximum.
struct SpectralSummary {
  std::vector<RationalTransferFunction> per_agent;
  std::vector<double> rho_per_agent;
  double rho = 0.0;

  static SpectralSummary from_agents(
      const std::vector<std::pair<ArmaModel, ArmaModel>>& agents);
};

enum class Regime { ExponentialDecay, ErrorFloor };  // "a" / "b"

struct AsymptoticReport {
  Regime regime = Regime::ExponentialDecay;
  double rho = 0.0;
  double alpha = 0.0;
  double beta_false_alarm = 0.0;
  double beta_miss = 0.0;
  std::vector<int> informative_agents;  // 0-based
  std::optional<double> floor_false_alarm;  // ErrorFloor only
  std::optional<double> floor_miss;
  double gamma = 0.0;
  int num_agents = 0;
  bool miss_floor_above_half = false;  // gamma > alpha/(2N)
};

enum class RhoCase { Unit, Subunit };

/// Limiting energy of one whitened signal: |r_1|^2 when the dominant pole
/// sits on the unit circle, otherwise the double sum
/// sum_{j,l} r_j conj(r_l) / (1 - p_j conj(p_l)). Requires residues.
std::pair<RhoCase, double> asymptotic_energy(const RationalTransferFunction& f);

/// Regime, growth constant alpha, decay rates / error floors and the
/// informative-agent set for the whole network.
AsymptoticReport classify(const SpectralSummary& summary, int num_agents,
                          double gamma);

/// Exact mean/covariance recursion of the decision vector under the
/// signal-present hypothesis:
///   mu(k) = W mu(k-1) + thetahat(k)^2 / 2,
///   Omega(k) = W Omega(k-1) W' + diag(thetahat(k)^2),
/// from mu(-1) = 0, Omega(-1) = 0.
struct MomentTrace {
  std::vector<Eigen::VectorXd> mean;      // mu(k), k = 0..horizon-1
  std::vector<Eigen::VectorXd> variance;  // diag of Omega(k)
  std::optional<Eigen::MatrixXd> final_covariance;
};

MomentTrace moment_trace(const std::vector<std::pair<ArmaModel, ArmaModel>>& agents,
                         const WeightMatrix& weights, int horizon,
                         bool keep_final_covariance = false,
                         const std::vector<int>& zero_signal_agents = {});

std::string to_string(Regime regime);  // "a" / "b"

}  // namespace rcd

#endif  // RCD_ANALYSIS_HPP
