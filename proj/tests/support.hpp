#ifndef RCD_TESTS_SUPPORT_HPP
#define RCD_TESTS_SUPPORT_HPP

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <vector>

#include "rcd/arma.hpp"
#include "rcd/transfer.hpp"

namespace rcd::test {

/// Expands prod_j (1 - roots[j] w) into real coefficients c[0] + c[1] w + ...
/// The root set must be closed under conjugation.
inline std::vector<double> poly_from_roots(
    const std::vector<std::complex<double>>& roots) {
  std::vector<std::complex<double>> poly{1.0};
  for (const auto& r : roots) {
    std::vector<std::complex<double>> next(poly.size() + 1, 0.0);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i] += poly[i];
      next[i + 1] -= r * poly[i];
    }
    poly = std::move(next);
  }
  std::vector<double> coeffs(poly.size());
  for (std::size_t i = 0; i < poly.size(); ++i) coeffs[i] = poly[i].real();
  return coeffs;
}

/// ArmaModel whose transfer function is scale * prod(1 - z w) / prod(1 - p w).
inline ArmaModel model_from_roots(const std::vector<std::complex<double>>& zeros,
                                  const std::vector<std::complex<double>>& poles,
                                  double scale) {
  const std::vector<double> num = poly_from_roots(zeros);
  const std::vector<double> den = poly_from_roots(poles);
  ArmaModel m;
  m.gain = scale;
  m.ma.assign(num.begin() + 1, num.end());
  m.ar.resize(den.size() - 1);
  for (std::size_t j = 1; j < den.size(); ++j) m.ar[j - 1] = -den[j];
  return m;
}

/// Random pole set: one dominant real pole, the rest reals or conjugate
/// pairs strictly below the dominant modulus.
inline std::vector<std::complex<double>> random_pole_set(std::mt19937_64& rng,
                                                         int count,
                                                         double dominant_modulus,
                                                         double sub_cap) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::complex<double>> poles;
  poles.emplace_back(unif(rng) < 0.5 ? dominant_modulus : -dominant_modulus, 0.0);
  const double cap = std::min(sub_cap, 0.9 * dominant_modulus);
  while (static_cast<int>(poles.size()) < count) {
    const int remaining = count - static_cast<int>(poles.size());
    const double r = (0.15 + 0.85 * unif(rng)) * cap;
    if (remaining >= 2 && unif(rng) < 0.5) {
      const double phi = 0.2 + 2.7 * unif(rng);
      poles.emplace_back(r * std::cos(phi), r * std::sin(phi));
      poles.emplace_back(r * std::cos(phi), -r * std::sin(phi));
    } else {
      poles.emplace_back(unif(rng) < 0.5 ? r : -r, 0.0);
    }
  }
  return poles;
}

/// Random stable ArmaModel with well-separated pole moduli; suitable for the
/// oracle-equivalence suites.
inline ArmaModel random_stable_model(std::mt19937_64& rng, int max_p, int max_q,
                                     double sigma_low, double sigma_high) {
  std::uniform_int_distribution<int> pick_p(0, max_p);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int p = pick_p(rng);
  std::uniform_int_distribution<int> pick_q(0, max_q);
  const int q = pick_q(rng);

  std::vector<std::complex<double>> poles =
      p > 0 ? random_pole_set(rng, p, 0.3 + 0.5 * unif(rng), 0.6)
            : std::vector<std::complex<double>>{};
  std::vector<std::complex<double>> zeros;
  while (static_cast<int>(zeros.size()) < q) {
    const double r = 0.1 + 0.7 * unif(rng);
    if (q - static_cast<int>(zeros.size()) >= 2 && unif(rng) < 0.4) {
      const double phi = 0.2 + 2.7 * unif(rng);
      zeros.emplace_back(r * std::cos(phi), r * std::sin(phi));
      zeros.emplace_back(r * std::cos(phi), -r * std::sin(phi));
    } else {
      zeros.emplace_back(unif(rng) < 0.5 ? r : -r, 0.0);
    }
  }
  ArmaModel m = model_from_roots(zeros, poles, 1.0);
  m.gain = sigma_low + (sigma_high - sigma_low) * unif(rng);
  return m;
}

/// Dense unit-lower-triangular pair (I - A, B) of the filter recursion,
/// built directly from the coefficients; test-local so the oracle path does
/// not share code with the implementation it checks.
inline void banded_filter_matrices(const ArmaModel& m, int dim,
                                   Eigen::MatrixXd& i_minus_a,
                                   Eigen::MatrixXd& b) {
  i_minus_a = Eigen::MatrixXd::Identity(dim, dim);
  b = Eigen::MatrixXd::Identity(dim, dim);
  for (int row = 0; row < dim; ++row) {
    for (int j = 1; j <= m.p() && j <= row; ++j)
      i_minus_a(row, row - j) = -m.ar[static_cast<std::size_t>(j - 1)];
    for (int j = 1; j <= m.q() && j <= row; ++j)
      b(row, row - j) = m.ma[static_cast<std::size_t>(j - 1)];
  }
}

}  // namespace rcd::test

#endif  // RCD_TESTS_SUPPORT_HPP
