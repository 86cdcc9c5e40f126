#include "ptqm/ptsym.hpp"

#include <cmath>
#include <random>

namespace ptqm {

ParityOperator::ParityOperator(ComplexMatrix p, double tol) : p_(std::move(p)) {
  if (!validate_parity(p_, tol)) {
    throw Error("ParityOperator: p*p differs from identity beyond tolerance");
  }
}

bool validate_parity(const ComplexMatrix& p, double tol) {
  return (p * p - ComplexMatrix::identity(p.dim())).frobenius_norm() <= tol;
}

double pt_residual(const ComplexMatrix& h, const ParityOperator& p) {
  if (h.dim() != p.p().dim()) throw DimensionError("satisfies_pt: dimension mismatch");
  return (h - p.p() * conjugate(h) * p.p()).frobenius_norm();
}

bool satisfies_pt(const ComplexMatrix& h, const ParityOperator& p, double tol) {
  return pt_residual(h, p) <= tol * h.frobenius_norm();
}

ComplexMatrix general_2x2(Complex h11, Complex h12) {
  return ComplexMatrix(2, {h11, h12, std::conj(h12), std::conj(h11)});
}

ComplexMatrix random_pt(const ParityOperator& p, std::uint64_t seed) {
  const ComplexMatrix& pm = p.p();
  const int n = pm.dim();
  double max_abs = 0.0, max_imag = 0.0;
  for (const Complex& z : pm.entries()) {
    max_abs = std::max(max_abs, std::abs(z));
    max_imag = std::max(max_imag, std::abs(z.imag()));
  }
  if (max_imag > 1e-12 * std::max(1.0, max_abs)) {
    throw Error("random_pt: generator requires a real-entried parity operator");
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  ComplexMatrix x(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) x(i, j) = Complex(unif(rng), unif(rng));

  ComplexMatrix h = x + pm * conjugate(x) * pm;
  h *= Complex(0.5, 0.0);
  return h;
}

std::pair<ParityOperator, ComplexMatrix> jordan_counterexample() {
  ParityOperator p(ComplexMatrix(2, {1.0, 1.0, 0.0, -1.0}));
  ComplexMatrix h(2, {1.0, Complex(0.0, 5.0), 0.0, 1.0});
  return {std::move(p), std::move(h)};
}

}  // namespace ptqm
