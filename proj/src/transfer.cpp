#include "rcd/transfer.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "rcd/errors.hpp"

namespace rcd {

namespace {

std::string complex_str(std::complex<double> z) {
  std::ostringstream os;
  os << z.real();
  if (z.imag() != 0.0) os << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

std::vector<double> trim_trailing_zeros(std::span<const double> coeffs) {
  std::size_t n = coeffs.size();
  while (n > 0 && coeffs[n - 1] == 0.0) --n;
  return {coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(n)};
}

}  // namespace

double RationalTransferFunction::rho() const {
  double r = 0.0;
  for (const auto& p : poles) r = std::max(r, std::abs(p));
  return r;
}

std::size_t RationalTransferFunction::dominant_pole_index() const {
  if (poles.empty())
    throw ArgumentError("dominant_pole_index: function has no poles");
  std::size_t best = 0;
  for (std::size_t j = 1; j < poles.size(); ++j)
    if (std::abs(poles[j]) > std::abs(poles[best])) best = j;
  return best;
}

std::complex<double> RationalTransferFunction::evaluate(std::complex<double> w) const {
  std::complex<double> value(scale, 0.0);
  for (const auto& z : zeros) value *= (1.0 - z * w);
  for (const auto& p : poles) value /= (1.0 - p * w);
  return value;
}

std::vector<std::complex<double>> polynomial_roots(std::span<const double> coeffs) {
  std::vector<double> c = trim_trailing_zeros(coeffs);
  if (c.empty())
    throw ArgumentError("polynomial_roots: zero polynomial has no defined roots");
  const int degree = static_cast<int>(c.size()) - 1;
  if (degree == 0) return {};
  if (degree == 1) return {std::complex<double>(-c[0] / c[1], 0.0)};

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
  for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < degree; ++i) companion(i, degree - 1) = -c[static_cast<std::size_t>(i)] / c.back();

  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    std::ostringstream os;
    os << "polynomial_roots: eigen iteration failed for coefficients [";
    for (std::size_t i = 0; i < c.size(); ++i) os << (i ? ", " : "") << c[i];
    os << "]";
    throw NumericError(os.str());
  }

  std::vector<std::complex<double>> roots(static_cast<std::size_t>(degree));
  for (int i = 0; i < degree; ++i) roots[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
  return roots;
}

RationalTransferFunction transfer_function(const ArmaModel& model) {
  model.validate();

  // Numerator 1 + sum ma[j] w^j factored as prod (1 - z_j w): the zeros are
  // the reciprocals of the polynomial roots in w. Same for the denominator.
  std::vector<double> numerator(model.ma.size() + 1, 0.0);
  numerator[0] = 1.0;
  for (std::size_t j = 0; j < model.ma.size(); ++j) numerator[j + 1] = model.ma[j];

  std::vector<double> denominator(model.ar.size() + 1, 0.0);
  denominator[0] = 1.0;
  for (std::size_t j = 0; j < model.ar.size(); ++j) denominator[j + 1] = -model.ar[j];

  RationalTransferFunction f;
  f.scale = model.gain;
  for (const auto& w : polynomial_roots(numerator)) f.zeros.push_back(1.0 / w);
  for (const auto& w : polynomial_roots(denominator)) f.poles.push_back(1.0 / w);
  return f;
}

RationalTransferFunction inverse(const RationalTransferFunction& f) {
  if (f.scale == 0.0) throw NumericError("inverse: zero scale");
  RationalTransferFunction g;
  g.scale = 1.0 / f.scale;
  g.zeros = f.poles;
  g.poles = f.zeros;
  return g;
}

void check_pole_zero_assumptions(const RationalTransferFunction& f) {
  using Kind = AssumptionViolation::Kind;
  using Tol = PoleZeroTolerances;

  for (std::size_t a = 0; a < f.poles.size(); ++a) {
    const double scale = std::max(1.0, std::abs(f.poles[a]));
    for (const auto& z : f.zeros) {
      if (std::abs(f.poles[a] - z) < Tol::near_cancel * scale)
        throw AssumptionViolation(
            Kind::ZeroPoleCancellation,
            "near zero-pole cancellation between pole " + complex_str(f.poles[a]) +
                " and zero " + complex_str(z));
    }
    for (std::size_t b = a + 1; b < f.poles.size(); ++b) {
      if (std::abs(f.poles[a] - f.poles[b]) < Tol::distinct * scale)
        throw AssumptionViolation(Kind::RepeatedPole,
                                  "repeated pole " + complex_str(f.poles[a]));
    }
  }

  if (!f.strictly_proper())
    throw AssumptionViolation(
        Kind::NotStrictlyProper,
        "transfer function is not strictly proper (" + std::to_string(f.poles.size()) +
            " poles, " + std::to_string(f.zeros.size()) + " zeros)");

  std::vector<double> moduli;
  moduli.reserve(f.poles.size());
  for (const auto& p : f.poles) moduli.push_back(std::abs(p));
  std::sort(moduli.begin(), moduli.end(), std::greater<>());

  if (moduli[0] > 1.0 + Tol::unit_pole)
    throw AssumptionViolation(Kind::UnstablePole,
                              "pole of modulus " + std::to_string(moduli[0]) +
                                  " lies outside the unit circle");
  if (moduli.size() >= 2 && moduli[0] - moduli[1] <= Tol::dominant_gap)
    throw AssumptionViolation(
        Kind::NonUniqueDominantPole,
        "largest pole modulus " + std::to_string(moduli[0]) +
            " is not attained by a unique pole (runner-up " +
            std::to_string(moduli[1]) + ")");
}

RationalTransferFunction cascade(const RationalTransferFunction& f,
                                 const RationalTransferFunction& g) {
  RationalTransferFunction h;
  h.scale = f.scale * g.scale;
  h.zeros = f.zeros;
  h.zeros.insert(h.zeros.end(), g.zeros.begin(), g.zeros.end());
  h.poles = f.poles;
  h.poles.insert(h.poles.end(), g.poles.begin(), g.poles.end());

  // Simplify exact common factors (e.g. a unit-root noise filter whitening a
  // unit-root signal); anything merely close is rejected by the checks below.
  for (std::size_t a = 0; a < h.poles.size();) {
    const double scale = std::max(1.0, std::abs(h.poles[a]));
    bool cancelled = false;
    for (std::size_t b = 0; b < h.zeros.size(); ++b) {
      if (std::abs(h.poles[a] - h.zeros[b]) <=
          PoleZeroTolerances::exact_cancel * scale) {
        h.poles.erase(h.poles.begin() + static_cast<std::ptrdiff_t>(a));
        h.zeros.erase(h.zeros.begin() + static_cast<std::ptrdiff_t>(b));
        cancelled = true;
        break;
      }
    }
    if (!cancelled) ++a;
  }

  check_pole_zero_assumptions(h);
  return h;
}

RationalTransferFunction whitened_signal_transfer(const ArmaModel& signal,
                                                  const ArmaModel& noise) {
  return cascade(inverse(transfer_function(noise)), transfer_function(signal));
}

RationalTransferFunction partial_fractions(RationalTransferFunction f) {
  using Kind = AssumptionViolation::Kind;

  if (!f.strictly_proper())
    throw AssumptionViolation(Kind::NotStrictlyProper,
                              "partial fractions require a strictly proper function");
  for (std::size_t a = 0; a < f.poles.size(); ++a)
    for (std::size_t b = a + 1; b < f.poles.size(); ++b)
      if (std::abs(f.poles[a] - f.poles[b]) <
          PoleZeroTolerances::distinct * std::max(1.0, std::abs(f.poles[a])))
        throw AssumptionViolation(Kind::RepeatedPole,
                                  "repeated pole " + complex_str(f.poles[a]) +
                                      " in partial fraction expansion");

  f.residues.resize(f.poles.size());
  for (std::size_t j = 0; j < f.poles.size(); ++j) {
    const std::complex<double> w = 1.0 / f.poles[j];
    std::complex<double> r(f.scale, 0.0);
    for (const auto& z : f.zeros) r *= (1.0 - z * w);
    for (std::size_t l = 0; l < f.poles.size(); ++l)
      if (l != j) r /= (1.0 - f.poles[l] * w);
    f.residues[j] = r;
  }
  return f;
}

std::vector<double> impulse_from_residues(const RationalTransferFunction& f,
                                          int length, double imag_tol) {
  if (length < 1) throw ArgumentError("impulse_from_residues: length must be >= 1");
  if (f.residues.size() != f.poles.size())
    throw ArgumentError("impulse_from_residues: residues not populated");

  std::vector<double> x(static_cast<std::size_t>(length), 0.0);
  std::vector<std::complex<double>> powers(f.poles.size(), 1.0);
  for (int k = 0; k < length; ++k) {
    std::complex<double> sum(0.0, 0.0);
    for (std::size_t j = 0; j < f.poles.size(); ++j) {
      sum += f.residues[j] * powers[j];
      powers[j] *= f.poles[j];
    }
    if (std::abs(sum.imag()) > imag_tol * std::max(1.0, std::abs(sum.real())))
      throw NumericError("impulse_from_residues: imaginary parts do not cancel at k=" +
                         std::to_string(k));
    x[static_cast<std::size_t>(k)] = sum.real();
  }
  return x;
}

}  // namespace rcd
