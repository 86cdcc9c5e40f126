#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ptqm/linalg.hpp"
#include "support.hpp"

using namespace ptqm;
using namespace ptqm::testing;

TEST_CASE("ComplexMatrix validates shape and finiteness") {
  CHECK_THROWS_AS(ComplexMatrix(2, {1.0, 2.0, 3.0}), DimensionError);
  CHECK_THROWS_AS(ComplexMatrix(0), DimensionError);
  CHECK_THROWS_AS(ComplexMatrix(1, {Complex(std::nan(""), 0.0)}), Error);
  CHECK_THROWS_AS(ComplexMatrix(1, {Complex(0.0, INFINITY)}), Error);
  const ComplexMatrix id = ComplexMatrix::identity(3);
  CHECK(id.frobenius_norm() == doctest::Approx(std::sqrt(3.0)));
}

TEST_CASE("eig: identity matrix") {
  const Eigensystem es = eig(ComplexMatrix::identity(3));
  for (int j = 0; j < 3; ++j) {
    CHECK(std::abs(es.values[j] - 1.0) <= 1e-14);
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(es.vectors(i, j) - (i == j ? 1.0 : 0.0)) <= 1e-14);
    }
  }
}

TEST_CASE("eig: diag(1, i, -i) sorts to {-i, i, 1}") {
  const Complex i(0.0, 1.0);
  const ComplexMatrix m = ComplexMatrix::diagonal(
      std::span<const Complex>(ComplexVector{1.0, i, -i}));
  const Eigensystem es = eig(m);
  CHECK(std::abs(es.values[0] - (-i)) <= 1e-14);
  CHECK(std::abs(es.values[1] - i) <= 1e-14);
  CHECK(std::abs(es.values[2] - Complex(1.0, 0.0)) <= 1e-14);
  // Standard basis vectors, permuted to match the sort.
  CHECK(std::abs(es.vectors(2, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(es.vectors(1, 1)) == doctest::Approx(1.0));
  CHECK(std::abs(es.vectors(0, 2)) == doctest::Approx(1.0));
}

TEST_CASE("eig: random Hermitian matrix has real spectrum, orthogonal vectors") {
  Rng rng(7);
  const ComplexMatrix h = hermitian_with_spectrum(rng, {-3.0, -1.0, 0.5, 1.5, 2.5, 4.0});
  const Eigensystem es = eig(h);
  std::vector<double> expected = {-3.0, -1.0, 0.5, 1.5, 2.5, 4.0};
  for (int j = 0; j < 6; ++j) {
    CHECK(std::abs(es.values[j].imag()) < 1e-10);
    CHECK(std::abs(es.values[j].real() - expected[j]) < 1e-10);
    for (int k = j + 1; k < 6; ++k) {
      ComplexVector vj(6), vk(6);
      for (int i = 0; i < 6; ++i) {
        vj[i] = es.vectors(i, j);
        vk[i] = es.vectors(i, k);
      }
      CHECK(std::abs(dot(vj, vk)) < 1e-8);
    }
  }
}

TEST_CASE("eig: residual and reconstruction bounds on random diagonalizable matrices") {
  Rng rng(11);
  for (int n : {2, 3, 5, 8}) {
    const DiagonalizableSample sample = random_diagonalizable(rng, n);
    const Eigensystem es = eig(sample.h);
    const double hnorm = sample.h.frobenius_norm();
    // ||h S - S Lambda||_F <= 1e-8 ||h||_F
    const ComplexMatrix lambda =
        ComplexMatrix::diagonal(std::span<const Complex>(es.values));
    CHECK((sample.h * es.vectors - es.vectors * lambda).frobenius_norm() <= 1e-8 * hnorm);
    // Column norms are 1.
    for (int j = 0; j < n; ++j) {
      double cn = 0.0;
      for (int i = 0; i < n; ++i) cn += std::norm(es.vectors(i, j));
      CHECK(std::sqrt(cn) == doctest::Approx(1.0).epsilon(1e-9));
    }
    // Eigenvalues recover d.
    for (int j = 0; j < n; ++j) {
      CHECK(std::abs(es.values[j] - Complex(sample.d[j], 0.0)) < 1e-9);
    }
  }
}

TEST_CASE("eig: eigenvalues invariant under similarity") {
  Rng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    ComplexMatrix m = random_ginibre(rng, n);
    const ComplexMatrix g = random_invertible(rng, n, 1e3);
    const ComplexMatrix similar = inverse(g) * m * g;
    const Eigensystem e1 = eig(m);
    const Eigensystem e2 = eig(similar);
    for (int j = 0; j < n; ++j) CHECK(std::abs(e1.values[j] - e2.values[j]) < 1e-8);
  }
}

TEST_CASE("eig: cyclic shift matrix (roots of unity, shift stagnation case)") {
  // Subdiagonal ones with a wrap-around corner: eigenvalues are the n-th
  // roots of unity. Plain Wilkinson shifts stagnate here; the exceptional
  // shift has to break the symmetry.
  const int n = 8;
  ComplexMatrix c(n);
  for (int i = 1; i < n; ++i) c(i, i - 1) = 1.0;
  c(0, n - 1) = 1.0;
  const Eigensystem es = eig(c);
  for (int j = 0; j < n; ++j) {
    CHECK(std::abs(std::abs(es.values[j]) - 1.0) < 1e-10);
    // Each value is an 8th root of unity.
    Complex pow = 1.0;
    for (int k = 0; k < n; ++k) pow *= es.values[j];
    CHECK(std::abs(pow - Complex(1.0, 0.0)) < 1e-8);
  }
}

TEST_CASE("eig: a long Jordan chain stays within the residual bound") {
  // J(2, 5): one eigenvalue, one true eigendirection. The guarded
  // back-substitution must produce unit vectors with tiny residuals and a
  // numerically rank-deficient eigenvector matrix.
  const int n = 5;
  ComplexMatrix j(n);
  for (int i = 0; i < n; ++i) j(i, i) = 2.0;
  for (int i = 0; i + 1 < n; ++i) j(i, i + 1) = 1.0;
  const Eigensystem es = eig(j);  // residual bound asserted internally
  for (int k = 0; k < n; ++k) CHECK(std::abs(es.values[k] - 2.0) < 1e-8);
  CHECK(cond(es.vectors) > 1e8);
}

TEST_CASE("eig: dense 128x128 draw converges within bound") {
  Rng rng(2024);
  const ComplexMatrix m = random_ginibre(rng, 128);
  const Eigensystem es = eig(m);  // internal residual check does the work
  CHECK(es.values.size() == 128);
  // Spot-check the reconstruction residual too.
  const ComplexMatrix lambda = ComplexMatrix::diagonal(std::span<const Complex>(es.values));
  CHECK((m * es.vectors - es.vectors * lambda).frobenius_norm() <= 1e-8 * m.frobenius_norm());
}

TEST_CASE("eig: iteration cap reports the achieved residual") {
  Rng rng(17);
  const ComplexMatrix m = random_ginibre(rng, 6);
  try {
    eig(m, 1e-9, 1);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.residual() > 0.0);
  }
}

TEST_CASE("expm: zero and diagonal cases") {
  CHECK(max_abs_diff(expm(ComplexMatrix(3)), ComplexMatrix::identity(3)) == 0.0);
  const Complex a(0.3, -0.2), b(-1.0, 2.0);
  const ComplexMatrix d = ComplexMatrix::diagonal(std::span<const Complex>(ComplexVector{a, b}));
  const ComplexMatrix e = expm(d);
  CHECK(std::abs(e(0, 0) - std::exp(a)) < 1e-14);
  CHECK(std::abs(e(1, 1) - std::exp(b)) < 1e-14);
  CHECK(std::abs(e(0, 1)) < 1e-15);
}

TEST_CASE("expm: quarter rotation about sigma_x") {
  // Frozen from the series oracle: expm(-i (pi/2) sigma_x) = -i sigma_x.
  const ComplexMatrix m = Complex(0.0, -std::numbers::pi / 2.0) * sigma_x();
  const ComplexMatrix e = expm(m);
  const ComplexMatrix expected = Complex(0.0, -1.0) * sigma_x();
  CHECK(max_abs_diff(e, expected) < 1e-14);
  CHECK(max_abs_diff(e, expm_taylor(m)) < 1e-13);
  // Maps (1,0) to -i (0,1).
  const ComplexVector mapped = e * std::span<const Complex>(ComplexVector{1.0, 0.0});
  CHECK(std::abs(mapped[0]) < 1e-14);
  CHECK(std::abs(mapped[1] - Complex(0.0, -1.0)) < 1e-14);
}

TEST_CASE("expm: agrees with the series oracle on random matrices") {
  Rng rng(19);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 7);
    ComplexMatrix m = random_ginibre(rng, n);
    const ComplexMatrix e = expm(m);
    const ComplexMatrix ref = expm_taylor(m);
    CHECK(rel_fro_diff(e, ref) < 1e-10);
  }
}

TEST_CASE("expm: inverse pairing and unitarity properties") {
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 7);
    ComplexMatrix m = random_ginibre(rng, n);
    const double norm = m.frobenius_norm();
    if (norm > 10.0) m *= Complex(10.0 / norm, 0.0);
    const ComplexMatrix prod = expm(m) * expm(Complex(-1.0, 0.0) * m);
    CHECK((prod - ComplexMatrix::identity(n)).frobenius_norm() < 1e-9);

    const ComplexMatrix h = hermitian_with_spectrum(rng, {1.0, -0.5, 2.0, 0.25});
    const ComplexMatrix u = expm(Complex(0.0, -1.0) * h);
    CHECK((adjoint(u) * u - ComplexMatrix::identity(4)).frobenius_norm() < 1e-9);
  }
}

TEST_CASE("expm: extreme norms raise an overflow error") {
  ComplexMatrix m(2, {1e20, 0.0, 0.0, 1e20});
  CHECK_THROWS_AS(expm(m), Error);
}

TEST_CASE("inverse: identity and involutory diagonal") {
  CHECK(max_abs_diff(inverse(ComplexMatrix::identity(4)), ComplexMatrix::identity(4)) < 1e-15);
  // diag(1, -1) is its own inverse.
  const ComplexMatrix d(2, {1.0, 0.0, 0.0, -1.0});
  CHECK(max_abs_diff(inverse(d), d) < 1e-15);
}

TEST_CASE("inverse: round trip on a random well-conditioned matrix") {
  Rng rng(29);
  const ComplexMatrix m = random_invertible(rng, 5, 100.0);
  const ComplexMatrix prod = m * inverse(m);
  CHECK((prod - ComplexMatrix::identity(5)).frobenius_norm() < 1e-10);
}

TEST_CASE("inverse: singular input carries a condition estimate") {
  ComplexMatrix m(2, {1.0, 2.0, 2.0, 4.0});
  try {
    inverse(m);
    FAIL("expected SingularMatrixError");
  } catch (const SingularMatrixError& e) {
    CHECK(!(e.cond_estimate() < 1e12));  // huge or infinite
  }
}

TEST_CASE("cond: identity, diagonal, and the singular sentinel") {
  CHECK(cond(ComplexMatrix::identity(3)) == doctest::Approx(1.0));
  const ComplexMatrix d(2, {10.0, 0.0, 0.0, 1.0});
  CHECK(cond(d) == doctest::Approx(10.0));
  const ComplexMatrix z(2);
  CHECK(std::isinf(cond(z)));
  ComplexMatrix rank1(2, {1.0, 1.0, 1.0, 1.0});
  CHECK(cond(rank1) > 1e15);
}

TEST_CASE("singular_values: descending and exact on diagonals") {
  const ComplexMatrix d = ComplexMatrix::diagonal(
      std::span<const Complex>(ComplexVector{2.0, -3.0, Complex(0.0, 1.0)}));
  const std::vector<double> s = singular_values(d);
  CHECK(s[0] == doctest::Approx(3.0));
  CHECK(s[1] == doctest::Approx(2.0));
  CHECK(s[2] == doctest::Approx(1.0));
}
