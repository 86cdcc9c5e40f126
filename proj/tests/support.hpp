#ifndef PTQM_TESTS_SUPPORT_HPP
#define PTQM_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "ptqm/linalg.hpp"

namespace ptqm::testing {

using Rng = std::mt19937_64;

inline ComplexMatrix sigma_x() { return ComplexMatrix(2, {0.0, 1.0, 1.0, 0.0}); }

inline ComplexVector random_vector(Rng& rng, int n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexVector v(static_cast<size_t>(n));
  for (Complex& z : v) z = Complex(gauss(rng), gauss(rng));
  return v;
}

inline ComplexMatrix random_ginibre(Rng& rng, int n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
  return m;
}

/// Ginibre draw filtered to cond <= cap, so similarity transforms stay tame.
inline ComplexMatrix random_invertible(Rng& rng, int n, double cond_cap = 1e3) {
  for (;;) {
    ComplexMatrix g = random_ginibre(rng, n);
    if (cond(g) <= cond_cap) return g;
  }
}

/// Unitary from Gram-Schmidt on a Ginibre draw.
inline ComplexMatrix random_unitary(Rng& rng, int n) {
  ComplexMatrix g = random_ginibre(rng, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < j; ++k) {
      Complex proj = 0.0;
      for (int i = 0; i < n; ++i) proj += std::conj(g(i, k)) * g(i, j);
      for (int i = 0; i < n; ++i) g(i, j) -= proj * g(i, k);
    }
    double colnorm = 0.0;
    for (int i = 0; i < n; ++i) colnorm += std::norm(g(i, j));
    colnorm = std::sqrt(colnorm);
    for (int i = 0; i < n; ++i) g(i, j) /= colnorm;
  }
  return g;
}

/// Hermitian matrix with a known real spectrum: Q diag(d) Q^H.
inline ComplexMatrix hermitian_with_spectrum(Rng& rng, std::vector<double> d) {
  const int n = static_cast<int>(d.size());
  const ComplexMatrix q = random_unitary(rng, n);
  const ComplexMatrix lambda = ComplexMatrix::diagonal(std::span<const double>(d));
  return q * lambda * adjoint(q);
}

struct DiagonalizableSample {
  ComplexMatrix h;        // g diag(d) g^-1
  std::vector<double> d;  // sorted ascending
  ComplexMatrix g;
};

inline DiagonalizableSample random_diagonalizable(Rng& rng, int n, double cond_cap = 1e3) {
  DiagonalizableSample out;
  out.g = random_invertible(rng, n, cond_cap);
  std::uniform_real_distribution<double> unif(-5.0, 5.0);
  out.d.resize(static_cast<size_t>(n));
  for (double& x : out.d) x = unif(rng);
  std::sort(out.d.begin(), out.d.end());
  const ComplexMatrix lambda = ComplexMatrix::diagonal(std::span<const double>(out.d));
  out.h = out.g * lambda * inverse(out.g);
  return out;
}

/// Independent exponential oracle: scale until the 1-norm is below 1/2, sum
/// the Taylor series to `terms`, then square back up. Deliberately shares no
/// code with expm().
inline ComplexMatrix expm_taylor(const ComplexMatrix& m, int terms = 30) {
  const int n = m.dim();
  int squarings = 0;
  double norm = m.one_norm();
  while (norm > 0.5) {
    norm *= 0.5;
    ++squarings;
  }
  ComplexMatrix a = m;
  a *= Complex(std::ldexp(1.0, -squarings), 0.0);

  ComplexMatrix sum = ComplexMatrix::identity(n);
  ComplexMatrix term = ComplexMatrix::identity(n);
  for (int k = 1; k <= terms; ++k) {
    term = term * a;
    term *= Complex(1.0 / k, 0.0);
    sum += term;
  }
  for (int k = 0; k < squarings; ++k) sum = sum * sum;
  return sum;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  double worst = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
  return worst;
}

inline double rel_fro_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  const double scale = std::max(1e-300, std::max(a.frobenius_norm(), b.frobenius_norm()));
  return (a - b).frobenius_norm() / scale;
}

}  // namespace ptqm::testing

#endif  // PTQM_TESTS_SUPPORT_HPP
