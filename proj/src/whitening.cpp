#include "rcd/whitening.hpp"

#include <cmath>

#include "rcd/errors.hpp"

namespace rcd {

CovarianceFactors initial_factors(const ArmaModel& noise) {
  noise.validate();
  if (noise.gain <= 0.0)
    throw ArgumentError("initial_factors: noise scale must be positive");
  CovarianceFactors f;
  f.i_minus_a = Eigen::MatrixXd::Identity(1, 1);
  f.ma_lower = Eigen::MatrixXd::Identity(1, 1);
  f.sigma = noise.gain;
  return f;
}

CovarianceFactors extend_factors(const CovarianceFactors& factors,
                                 const ArmaModel& noise) {
  const int d = factors.dimension();
  CovarianceFactors out;
  out.sigma = factors.sigma;
  out.i_minus_a = Eigen::MatrixXd::Zero(d + 1, d + 1);
  out.ma_lower = Eigen::MatrixXd::Zero(d + 1, d + 1);
  out.i_minus_a.topLeftCorner(d, d) = factors.i_minus_a;
  out.ma_lower.topLeftCorner(d, d) = factors.ma_lower;
  out.i_minus_a(d, d) = 1.0;
  out.ma_lower(d, d) = 1.0;

  // New row at time index d: coefficient j lands in column d - j.
  for (int j = 1; j <= std::min(d, noise.p()); ++j)
    out.i_minus_a(d, d - j) = -noise.ar[static_cast<std::size_t>(j - 1)];
  for (int j = 1; j <= std::min(d, noise.q()); ++j)
    out.ma_lower(d, d - j) = noise.ma[static_cast<std::size_t>(j - 1)];
  return out;
}

CovarianceFactors factors_for_dimension(const ArmaModel& noise, int dimension) {
  if (dimension < 1)
    throw ArgumentError("factors_for_dimension: dimension must be >= 1");
  CovarianceFactors f = initial_factors(noise);
  for (int d = 1; d < dimension; ++d) f = extend_factors(f, noise);
  return f;
}

Eigen::MatrixXd cholesky_factor(const CovarianceFactors& factors) {
  // Solve (I - A) L = sigma B column by column; everything is triangular.
  return factors.i_minus_a.triangularView<Eigen::Lower>().solve(
      (factors.sigma * factors.ma_lower).eval());
}

Eigen::MatrixXd covariance(const CovarianceFactors& factors) {
  Eigen::MatrixXd l = cholesky_factor(factors);
  return l * l.transpose();
}

WhiteningState::WhiteningState(const ArmaModel& noise)
    : model_(noise),
      past_out_(noise.ma.size(), 0.0),
      past_in_(noise.ar.size(), 0.0) {
  model_.validate();
  if (model_.gain <= 0.0)
    throw ArgumentError("WhiteningState: noise scale must be positive");
}

double WhiteningState::step(double sample) {
  if (!std::isfinite(sample))
    throw NumericError("whiten_step: non-finite input sample");

  double raw = sample;
  for (std::size_t j = 0; j < model_.ar.size(); ++j)
    raw -= model_.ar[j] * past_in_[j];
  double out = raw / model_.gain;
  for (std::size_t j = 0; j < model_.ma.size(); ++j)
    out -= model_.ma[j] * past_out_[j];

  for (std::size_t i = past_in_.size(); i > 1; --i) past_in_[i - 1] = past_in_[i - 2];
  if (!past_in_.empty()) past_in_[0] = sample;
  for (std::size_t i = past_out_.size(); i > 1; --i) past_out_[i - 1] = past_out_[i - 2];
  if (!past_out_.empty()) past_out_[0] = out;
  return out;
}

void WhiteningState::reset() {
  past_out_.assign(past_out_.size(), 0.0);
  past_in_.assign(past_in_.size(), 0.0);
}

namespace oracle {

Eigen::MatrixXd dense_cholesky(const Eigen::MatrixXd& spd) {
  const int n = static_cast<int>(spd.rows());
  if (spd.cols() != n) throw ArgumentError("dense_cholesky: matrix not square");
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    double diag = spd(j, j);
    for (int k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (diag <= 0.0)
      throw NumericError("dense_cholesky: non-positive pivot at index " +
                         std::to_string(j));
    l(j, j) = std::sqrt(diag);
    for (int i = j + 1; i < n; ++i) {
      double v = spd(i, j);
      for (int k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / l(j, j);
    }
  }
  return l;
}

Eigen::VectorXd forward_substitution(const Eigen::MatrixXd& lower,
                                     const Eigen::VectorXd& rhs) {
  const int n = static_cast<int>(lower.rows());
  if (rhs.size() != n)
    throw ArgumentError("forward_substitution: size mismatch");
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) {
    double v = rhs(i);
    for (int j = 0; j < i; ++j) v -= lower(i, j) * x(j);
    if (lower(i, i) == 0.0)
      throw NumericError("forward_substitution: zero diagonal at index " +
                         std::to_string(i));
    x(i) = v / lower(i, i);
  }
  return x;
}

}  // namespace oracle

}  // namespace rcd
