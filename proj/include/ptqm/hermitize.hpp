#ifndef PTQM_HERMITIZE_HPP
#define PTQM_HERMITIZE_HPP

#include <utility>

#include "ptqm/acceptability.hpp"
#include "ptqm/linalg.hpp"

namespace ptqm {

/// Invertible basis change with the inverse cached. States transform as
/// |phi'> = b_inv |phi|; operators as b_inv * O * b.
class BasisChange {
 public:
  /// From b; the inverse is computed (throws SingularMatrixError).
  explicit BasisChange(ComplexMatrix b);

  /// From the inverse matrix, for bases specified the other way round.
  static BasisChange from_inverse(ComplexMatrix b_inv);

  const ComplexMatrix& b() const { return b_; }
  const ComplexMatrix& b_inv() const { return b_inv_; }
  int dim() const { return b_.dim(); }

 private:
  BasisChange(ComplexMatrix b, ComplexMatrix b_inv)
      : b_(std::move(b)), b_inv_(std::move(b_inv)) {}
  ComplexMatrix b_;
  ComplexMatrix b_inv_;
};

/// A non-Hermitian Hamiltonian factored as basis.b * h_herm * basis.b_inv
/// with h_herm real diagonal, plus the metric (b_inv^H b_inv) that makes the
/// eigenvectors orthonormal.
struct EquivalencePair {
  ComplexMatrix h_pt;
  ComplexMatrix h_herm;
  BasisChange basis;
  MetricOperator metric;
};

/// Factors an accepted Hamiltonian into a real-diagonal matrix conjugated by
/// its eigenvector basis. Columns are unit norm, degenerate clusters
/// orthonormalized, and each column's largest-modulus component is made real
/// positive, so the output is deterministic. Rejection reasons from the
/// acceptability pipeline propagate as errors.
EquivalencePair hermitize(const ComplexMatrix& h, const AcceptConfig& config = {});

/// Runs the construction in reverse: rewrites a Hermitian h in the
/// non-orthogonal basis b, returning h' = b_inv * h * b with the metric
/// b^H b that preserves all amplitudes.
std::pair<ComplexMatrix, MetricOperator> to_nonorthogonal(const ComplexMatrix& h_herm,
                                                          const BasisChange& b);

enum class TransformDirection { kForward, kBackward };

/// kForward applies b_inv (into the primed description), kBackward applies b.
ComplexVector transform_state(std::span<const Complex> v, const BasisChange& b,
                              TransformDirection direction);

/// Same covariance rule as the Hamiltonian: b_inv * o * b.
ComplexMatrix transform_operator(const ComplexMatrix& o, const BasisChange& b);

/// Sorted eigenvalue lists agree componentwise within tol.
bool spectra_equal(const ComplexMatrix& h1, const ComplexMatrix& h2, double tol = 1e-8);

}  // namespace ptqm

#endif  // PTQM_HERMITIZE_HPP
