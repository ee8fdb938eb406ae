#include "rcd/detector.hpp"

#include <cmath>

#include "rcd/errors.hpp"

namespace rcd {

ThetaSource::ThetaSource(const ArmaModel& signal)
    : model_(signal), memory_(signal) {
  model_.validate();
}

double ThetaSource::next() {
  const double impulse = (time_ == 0) ? 1.0 : 0.0;
  ++time_;
  return filter_step(model_, memory_, impulse);
}

AgentChannel::AgentChannel(const ArmaModel& signal, const ArmaModel& noise)
    : signal_model(signal),
      noise_model(noise),
      signal_whitener(noise),
      obs_whitener(noise),
      theta(signal) {}

double innovation(AgentChannel& channel, double observation) {
  if (!std::isfinite(observation))
    throw NumericError("innovation: non-finite observation");
  double theta_hat = channel.signal_whitener.step(channel.theta.next());
  const double y_hat = channel.obs_whitener.step(observation);
  if (channel.zero_signal) theta_hat = 0.0;
  return theta_hat * y_hat - 0.5 * theta_hat * theta_hat;
}

SparseWeights SparseWeights::from(const WeightMatrix& w) {
  SparseWeights s;
  s.n = w.n();
  s.row_ptr.assign(static_cast<std::size_t>(s.n) + 1, 0);
  for (int i = 0; i < s.n; ++i) {
    for (int j = 0; j < s.n; ++j) {
      if (i == j || w.entries(i, j) != 0.0) {
        s.col.push_back(j);
        s.value.push_back(w.entries(i, j));
      }
    }
    s.row_ptr[static_cast<std::size_t>(i) + 1] = static_cast<int>(s.col.size());
  }
  return s;
}

void SparseWeights::multiply(const std::vector<double>& x,
                             std::vector<double>& out) const {
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int idx = row_ptr[static_cast<std::size_t>(i)];
         idx < row_ptr[static_cast<std::size_t>(i) + 1]; ++idx)
      acc += value[static_cast<std::size_t>(idx)] *
             x[static_cast<std::size_t>(col[static_cast<std::size_t>(idx)])];
    out[static_cast<std::size_t>(i)] = acc;
  }
}

DetectorState::DetectorState(std::vector<AgentChannel> agents,
                             const WeightMatrix& weights, double gamma)
    : agents_(std::move(agents)),
      weights_(SparseWeights::from(weights)),
      gamma_(gamma),
      l_(agents_.size(), 0.0),
      mixed_(agents_.size(), 0.0) {
  if (static_cast<int>(agents_.size()) != weights.n())
    throw ArgumentError("DetectorState: agent count does not match the weight matrix");
}

const std::vector<double>& DetectorState::advance(
    std::span<const double> observations) {
  if (observations.size() != agents_.size())
    throw ArgumentError("rcd_step: observation vector has wrong length");

  weights_.multiply(l_, mixed_);
  for (std::size_t i = 0; i < agents_.size(); ++i)
    l_[i] = mixed_[i] + innovation(agents_[i], observations[i]);
  ++time_;
  return l_;
}

DecisionRecord DetectorState::step(std::span<const double> observations) {
  advance(observations);
  DecisionRecord record;
  record.time = time_;
  record.statistics = l_;
  record.decisions.resize(agents_.size());
  for (std::size_t i = 0; i < agents_.size(); ++i)
    record.decisions[i] = l_[i] >= gamma_ ? 1 : 0;
  return record;
}

std::vector<double> centralized_llr(
    const std::vector<std::pair<ArmaModel, ArmaModel>>& agent_models,
    const std::vector<SignalTrace>& observations, int k) {
  if (agent_models.size() != observations.size())
    throw ArgumentError("centralized_llr: model/observation count mismatch");
  if (k < 0) throw ArgumentError("centralized_llr: k must be >= 0");

  const int dim = k + 1;
  std::vector<double> l(agent_models.size(), 0.0);
  for (std::size_t i = 0; i < agent_models.size(); ++i) {
    const auto& [signal, noise] = agent_models[i];
    if (static_cast<int>(observations[i].samples.size()) < dim)
      throw ArgumentError("centralized_llr: observation history shorter than k+1");

    const Eigen::MatrixXd factor =
        cholesky_factor(factors_for_dimension(noise, dim));

    Eigen::VectorXd theta(dim), y(dim);
    const SignalTrace trace = impulse_response(signal, dim);
    for (int m = 0; m < dim; ++m) {
      theta(m) = trace.samples[static_cast<std::size_t>(m)];
      y(m) = observations[i].samples[static_cast<std::size_t>(m)];
    }
    const Eigen::VectorXd theta_hat = oracle::forward_substitution(factor, theta);
    const Eigen::VectorXd y_hat = oracle::forward_substitution(factor, y);
    l[i] = theta_hat.dot(y_hat) - 0.5 * theta_hat.squaredNorm();
  }
  return l;
}

}  // namespace rcd
