#ifndef PTQM_LINALG_HPP
#define PTQM_LINALG_HPP

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ptqm {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

inline constexpr double kDefaultTol = 1e-9;

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error(what) {}
};

/// Iteration limit hit; carries the best residual reached.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Matrix singular to working precision; carries a condition estimate.
class SingularMatrixError : public Error {
 public:
  SingularMatrixError(const std::string& what, double cond_estimate)
      : Error(what), cond_estimate_(cond_estimate) {}
  double cond_estimate() const { return cond_estimate_; }

 private:
  double cond_estimate_;
};

/// Dense square complex matrix, row-major. Entries are validated finite on
/// construction; instances are immutable in spirit (all library operations
/// take const references and return fresh values).
class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  /// Zero matrix of the given dimension (dim >= 1).
  explicit ComplexMatrix(int dim);

  /// From row-major entries; requires entries.size() == dim*dim and all
  /// values finite.
  ComplexMatrix(int dim, ComplexVector entries);

  static ComplexMatrix identity(int dim);
  static ComplexMatrix diagonal(std::span<const Complex> d);
  static ComplexMatrix diagonal(std::span<const double> d);

  int dim() const { return dim_; }

  Complex& operator()(int i, int j) { return entries_[static_cast<size_t>(i) * dim_ + j]; }
  const Complex& operator()(int i, int j) const {
    return entries_[static_cast<size_t>(i) * dim_ + j];
  }

  const ComplexVector& entries() const { return entries_; }

  double frobenius_norm() const;
  /// Maximum absolute column sum.
  double one_norm() const;
  bool is_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(Complex scale);

 private:
  int dim_ = 0;
  ComplexVector entries_;
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(Complex scale, ComplexMatrix m);
ComplexVector operator*(const ComplexMatrix& m, std::span<const Complex> v);

ComplexMatrix adjoint(const ComplexMatrix& m);
ComplexMatrix conjugate(const ComplexMatrix& m);
ComplexMatrix transpose(const ComplexMatrix& m);

// Vector helpers. dot conjugates its first argument.
Complex dot(std::span<const Complex> u, std::span<const Complex> v);
double norm2(std::span<const Complex> v);

/// Eigenvalues and unit-norm eigenvectors; column j of `vectors` pairs with
/// values[j]. Values come back sorted by (Re, Im), ties by original index.
struct Eigensystem {
  ComplexVector values;
  ComplexMatrix vectors;
};

/// Eigendecomposition of a general complex matrix: Householder reduction to
/// Hessenberg form, shifted QR to Schur form, then triangular
/// back-substitution for the eigenvectors. Guarantees
/// max_j ||m v_j - lambda_j v_j||_2 <= rtol * ||m||_F or throws
/// ConvergenceError. `max_sweeps` of 0 means the default cap of 30*dim.
Eigensystem eig(const ComplexMatrix& m, double rtol = kDefaultTol,
                int max_sweeps = 0);

/// Matrix exponential via Pade approximants with scaling and squaring.
/// Throws Error when the result overflows, reporting ||m||.
ComplexMatrix expm(const ComplexMatrix& m);

/// Inverse via LU with partial pivoting. Throws SingularMatrixError (with a
/// condition estimate) when a pivot falls below dim * eps * max|entry|.
ComplexMatrix inverse(const ComplexMatrix& m);

/// Singular values in descending order (one-sided Jacobi).
std::vector<double> singular_values(const ComplexMatrix& m);

/// Ratio of the largest to the smallest singular value. Returns +infinity
/// for numerically singular input.
double cond(const ComplexMatrix& m);

namespace detail {
// LU factorization with partial pivoting, shared by inverse() and expm().
// Returns false if a pivot is numerically zero.
struct LuFactors {
  ComplexMatrix lu;
  std::vector<int> perm;
  double min_pivot = 0.0;
  double max_pivot = 0.0;
};
bool lu_factor(const ComplexMatrix& m, LuFactors& out);
ComplexVector lu_solve(const LuFactors& f, std::span<const Complex> rhs);
ComplexMatrix lu_solve_matrix(const LuFactors& f, const ComplexMatrix& rhs);
}  // namespace detail

}  // namespace ptqm

#endif  // PTQM_LINALG_HPP
