#ifndef RCD_WHITENING_HPP
#define RCD_WHITENING_HPP

#include <Eigen/Dense>
#include <vector>

#include "rcd/arma.hpp"

namespace rcd {

/// Banded factors of the noise covariance at dimension k+1:
///
///   Sigma(k) = L L^T  with  L = sigma * (I - A)^-1 * B,
///
/// where I - A is unit lower triangular with the AR band and B is unit lower
/// triangular with the MA band. Stored dense: these factors exist for
/// verification, not for the streaming path.
struct CovarianceFactors {
  Eigen::MatrixXd i_minus_a;
  Eigen::MatrixXd ma_lower;
  double sigma = 1.0;

  int dimension() const { return static_cast<int>(i_minus_a.rows()); }
};

/// Dimension-1 factors: I - A = [1], B = [1].
CovarianceFactors initial_factors(const ArmaModel& noise);

/// Appends one row to each factor, reversing and zero-padding the
/// coefficients of `noise`. Dimension grows by exactly one.
CovarianceFactors extend_factors(const CovarianceFactors& factors,
                                 const ArmaModel& noise);

/// Convenience: initial_factors extended to the requested dimension.
CovarianceFactors factors_for_dimension(const ArmaModel& noise, int dimension);

/// The lower-triangular factor L = sigma * (I - A)^-1 * B (triangular solve).
Eigen::MatrixXd cholesky_factor(const CovarianceFactors& factors);

/// Sigma = L L^T, symmetric positive definite.
Eigen::MatrixXd covariance(const CovarianceFactors& factors);

/// Streaming inverse of the noise filter. Feeding it z(0), z(1), ... yields
/// the entries of L^-1 z, one per step:
///
///   zhat(k) = -sum_{j=1..q} ma[j-1] zhat(k-j)
///           + ( z(k) - sum_{j=1..p} ar[j-1] z(k-j) ) / sigma,
///
/// with zero initial conditions. Memory is q past outputs plus p past raw
/// samples, independent of how many steps have been taken.
class WhiteningState {
 public:
  WhiteningState() = default;
  explicit WhiteningState(const ArmaModel& noise);

  /// Consumes z(k), returns zhat(k). Throws NumericError on non-finite input.
  double step(double sample);

  void reset();
  const ArmaModel& model() const { return model_; }
  std::size_t memory_size() const { return past_out_.size() + past_in_.size(); }

 private:
  ArmaModel model_;
  std::vector<double> past_out_;  // last q whitened samples, newest first
  std::vector<double> past_in_;   // last p raw samples, newest first
};

inline double whiten_step(WhiteningState& state, double sample) {
  return state.step(sample);
}

namespace oracle {

/// Unblocked dense Cholesky; throws NumericError on a non-positive pivot.
Eigen::MatrixXd dense_cholesky(const Eigen::MatrixXd& spd);

/// Solves L x = b for lower-triangular L by forward substitution.
Eigen::VectorXd forward_substitution(const Eigen::MatrixXd& lower,
                                     const Eigen::VectorXd& rhs);

}  // namespace oracle

}  // namespace rcd

#endif  // RCD_WHITENING_HPP
