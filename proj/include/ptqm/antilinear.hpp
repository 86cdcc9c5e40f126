#ifndef PTQM_ANTILINEAR_HPP
#define PTQM_ANTILINEAR_HPP

#include <optional>
#include <vector>

#include "ptqm/linalg.hpp"

namespace ptqm {

/// Anti-linear operator A(v) = m * conj(v). Only the linear part is stored;
/// conjugation is implicit in apply().
struct AntilinearOperator {
  ComplexMatrix m;
};

ComplexVector apply(const AntilinearOperator& a, std::span<const Complex> v);
// By-value overload: keeps unqualified calls with vectors away from
// std::apply, which ADL drags in for std::vector arguments.
inline ComplexVector apply(const AntilinearOperator& a, ComplexVector v) {
  return apply(a, std::span<const Complex>(v));
}

/// True iff m * conj(m) = I within tol (Frobenius). A(A(v)) = v everywhere.
bool is_involution(const AntilinearOperator& a, double tol = 1e-8);

/// Operator commutation [h, A] = 0 evaluated on a basis:
/// ||h m - m conj(h)||_F <= tol * ||h||_F.
bool commutes_with(const ComplexMatrix& h, const AntilinearOperator& a, double tol = 1e-8);

struct SharedRecord {
  Complex eigenvalue;
  bool is_shared = false;
  /// <v, A v>/||v||^2 when shared. Gauge-dependent: re-phasing v changes it.
  std::optional<Complex> antilinear_eigenvalue;
  /// Relative component of A(v) outside the eigenvector (or eigenspace).
  double residual = 0.0;
};

/// Per-eigenvector verdicts on whether h and the anti-linear symmetry share
/// eigenvectors. `unbroken` iff every record is shared.
struct SharedSpectrumReport {
  std::vector<SharedRecord> records;
  bool unbroken = false;
};

class DefectiveMatrixError : public Error {
 public:
  explicit DefectiveMatrixError(const std::string& what) : Error(what) {}
};

/// Tests each eigenvector of h for invariance under a. Degenerate
/// eigenvalues are handled subspace-wise: a must map the eigenspace into
/// itself, and every vector in the cluster gets the subspace verdict.
/// Requires [h, a] = 0 (throws Error otherwise) and diagonalizable h
/// (throws DefectiveMatrixError), and rejects singular a.
SharedSpectrumReport shared_spectrum(const ComplexMatrix& h, const AntilinearOperator& a,
                                     double tol = 1e-8);

}  // namespace ptqm

#endif  // PTQM_ANTILINEAR_HPP
