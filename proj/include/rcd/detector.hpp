#ifndef RCD_DETECTOR_HPP
#define RCD_DETECTOR_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "rcd/arma.hpp"
#include "rcd/network.hpp"
#include "rcd/whitening.hpp"

namespace rcd {

/// Generates the deterministic signal theta(k) one sample at a time by
/// feeding the signal filter a unit impulse. Keeping the generator streaming
/// (instead of precomputing the trace) preserves the constant-memory claim.
class ThetaSource {
 public:
  ThetaSource() = default;
  explicit ThetaSource(const ArmaModel& signal);
  double next();

 private:
  ArmaModel model_;
  FilterMemory memory_;
  int time_ = 0;
};

/// Everything one agent carries: its two models, two copies of the whitening
/// filter (one fed theta, one fed the observations) and the theta generator.
/// State size depends on the model orders only, never on time.
struct AgentChannel {
  ArmaModel signal_model;
  ArmaModel noise_model;
  WhiteningState signal_whitener;
  WhiteningState obs_whitener;
  ThetaSource theta;
  bool zero_signal = false;  // ablation switch: forces thetahat == 0

  AgentChannel(const ArmaModel& signal, const ArmaModel& noise);
};

/// One step of the innovation map: advances both whiteners and the theta
/// generator, returns thetahat(k) * yhat(k) - thetahat(k)^2 / 2.
double innovation(AgentChannel& channel, double observation);

/// Compressed rows of W for the per-step multiply; cost is proportional to
/// the number of edges, not N^2.
struct SparseWeights {
  int n = 0;
  std::vector<int> row_ptr;
  std::vector<int> col;
  std::vector<double> value;

  static SparseWeights from(const WeightMatrix& w);
  void multiply(const std::vector<double>& x, std::vector<double>& out) const;
};

struct DecisionRecord {
  int time = -1;
  std::vector<std::uint8_t> decisions;  // D_i(k) = 1 iff l_i(k) >= gamma
  std::vector<double> statistics;       // l_i(k)
};

/// The running consensus detector: l(k) = W l(k-1) + eta(k), started from
/// l(-1) = 0, thresholded at gamma.
class DetectorState {
 public:
  DetectorState(std::vector<AgentChannel> agents, const WeightMatrix& weights,
                double gamma);

  /// Consumes y(k) for all agents, returns the new statistics vector.
  /// Allocation-free; this is the Monte Carlo hot path.
  /// Throws ArgumentError on a size mismatch.
  const std::vector<double>& advance(std::span<const double> observations);

  /// advance() plus a materialized record of statistics and decisions.
  DecisionRecord step(std::span<const double> observations);

  int time() const { return time_; }
  double gamma() const { return gamma_; }
  const std::vector<double>& statistics() const { return l_; }
  std::vector<AgentChannel>& agents() { return agents_; }

 private:
  std::vector<AgentChannel> agents_;
  SparseWeights weights_;
  double gamma_;
  std::vector<double> l_;
  std::vector<double> mixed_;
  int time_ = -1;
};

/// Dense-algebra log-likelihood statistics l_i(k) computed from the full
/// history: theta' Sigma^-1 y - theta' Sigma^-1 theta / 2 via triangular
/// solves against the recursive Cholesky factors. This is the centralized
/// reference the streaming path must reproduce.
std::vector<double> centralized_llr(
    const std::vector<std::pair<ArmaModel, ArmaModel>>& agent_models,
    const std::vector<SignalTrace>& observations, int k);

}  // namespace rcd

#endif  // RCD_DETECTOR_HPP
