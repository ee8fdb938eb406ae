#ifndef RCD_TRANSFER_HPP
#define RCD_TRANSFER_HPP

#include <complex>
#include <span>
#include <vector>

#include "rcd/arma.hpp"

namespace rcd {

/// Tolerances for the structural checks on pole/zero layouts.
///
/// A pole/zero pair closer than `exact_cancel` (relative to max(1,|pole|))
/// is treated as a structural common factor and simplified away; a pair
/// closer than `near_cancel` but not exact is an error, because the setup
/// forbids cancellations and a near-miss indicates an ill-posed model rather
/// than an intended reduction. The two largest pole moduli must differ by
/// more than `dominant_gap`, and a modulus within `unit_pole` of 1 counts
/// as a unit-circle pole.
struct PoleZeroTolerances {
  static constexpr double exact_cancel = 1e-12;
  static constexpr double near_cancel = 1e-8;
  static constexpr double distinct = 1e-8;
  static constexpr double dominant_gap = 1e-8;
  static constexpr double unit_pole = 1e-9;
};

/// A rational function of z^-1 in factored form:
///
///   f(z^-1) = scale * prod_j (1 - zeros[j] z^-1) / prod_j (1 - poles[j] z^-1).
///
/// `residues` is empty until partial_fractions() populates it (one entry per
/// pole, same order).
struct RationalTransferFunction {
  double scale = 1.0;
  std::vector<std::complex<double>> zeros;
  std::vector<std::complex<double>> poles;
  std::vector<std::complex<double>> residues;

  bool strictly_proper() const { return poles.size() > zeros.size(); }

  /// Largest pole modulus; 0 when there are no poles.
  double rho() const;

  /// Index of the pole attaining rho(). Throws ArgumentError if empty.
  std::size_t dominant_pole_index() const;

  /// Evaluates f at w = z^-1.
  std::complex<double> evaluate(std::complex<double> w) const;
};

/// Roots of c[0] + c[1] w + ... + c[n] w^n via the companion-matrix
/// eigenvalue method. Trailing zero coefficients are trimmed first.
/// Throws NumericError (carrying the coefficients) if the eigen iteration
/// fails, ArgumentError if the polynomial is identically zero.
std::vector<std::complex<double>> polynomial_roots(std::span<const double> coeffs);

/// Z-domain view of an ARMA model:
/// gain * (1 + sum ma[j] w^j) / (1 - sum ar[j] w^j) in factored form.
RationalTransferFunction transfer_function(const ArmaModel& model);

/// Reciprocal: swaps zeros and poles, inverts the scale.
RationalTransferFunction inverse(const RationalTransferFunction& f);

/// Product f*g with structural checks: exact pole/zero common factors are
/// simplified, near-cancellations, repeated poles, a non-strictly-proper
/// result, an unstable pole, or a tied dominant pole all raise
/// AssumptionViolation.
RationalTransferFunction cascade(const RationalTransferFunction& f,
                                 const RationalTransferFunction& g);

/// The transfer function of the whitened deterministic signal: the inverse
/// noise filter cascaded with the signal filter. This is the object the
/// structural assumptions are stated about.
RationalTransferFunction whitened_signal_transfer(const ArmaModel& signal,
                                                  const ArmaModel& noise);

/// Runs the structural checks of cascade() on an already-built function.
void check_pole_zero_assumptions(const RationalTransferFunction& f);

/// Populates residues: r_j = (1 - p_j z^-1) f(z^-1) at z = p_j.
/// Requires a strictly proper function with simple poles.
RationalTransferFunction partial_fractions(RationalTransferFunction f);

/// Impulse response sum_j r_j p_j^k for k = 0..length-1. The imaginary
/// parts must cancel (conjugate pole pairs); throws NumericError if any
/// exceeds `imag_tol`.
std::vector<double> impulse_from_residues(const RationalTransferFunction& f,
                                          int length, double imag_tol = 1e-8);

}  // namespace rcd

#endif  // RCD_TRANSFER_HPP
