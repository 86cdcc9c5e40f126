#ifndef PTQM_PTSYM_HPP
#define PTQM_PTSYM_HPP

#include <cstdint>
#include <utility>

#include "ptqm/linalg.hpp"

namespace ptqm {

/// Involutory parity operator (p * p = I within tolerance). Need not be
/// Hermitian or diagonalizable.
class ParityOperator {
 public:
  explicit ParityOperator(ComplexMatrix p, double tol = 1e-9);
  const ComplexMatrix& p() const { return p_; }

 private:
  ComplexMatrix p_;
};

/// ||p*p - I||_F <= tol.
bool validate_parity(const ComplexMatrix& p, double tol = 1e-9);

/// Consistency condition h = p * conj(h) * p with time reversal fixed as
/// componentwise conjugation; relative residual against ||h||_F.
bool satisfies_pt(const ComplexMatrix& h, const ParityOperator& p, double tol = 1e-9);

/// Residual ||h - p conj(h) p||_F, for diagnostics.
double pt_residual(const ComplexMatrix& h, const ParityOperator& p);

/// Most general 2x2 solution of the consistency condition for parity
/// sigma_x: [[h11, h12], [conj(h12), conj(h11)]]. Two free complex
/// parameters; the condition pins the second diagonal entry to conj(h11).
ComplexMatrix general_2x2(Complex h11, Complex h12);

/// Seeded random matrix satisfying the consistency condition by
/// symmetrization h = (x + p conj(x) p)/2. Restricted to real involutory p;
/// complex-entried p is rejected.
ComplexMatrix random_pt(const ParityOperator& p, std::uint64_t seed);

/// The defective pair P = [[1,1],[0,-1]], H = [[1,5i],[0,1]]: H satisfies the
/// consistency condition and has a real spectrum, but its lone eigenvector
/// does not span the space.
std::pair<ParityOperator, ComplexMatrix> jordan_counterexample();

}  // namespace ptqm

#endif  // PTQM_PTSYM_HPP
