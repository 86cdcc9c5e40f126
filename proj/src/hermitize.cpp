#include "ptqm/hermitize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ptqm {

BasisChange::BasisChange(ComplexMatrix b) : b_(std::move(b)), b_inv_(inverse(b_)) {}

BasisChange BasisChange::from_inverse(ComplexMatrix b_inv) {
  ComplexMatrix b = inverse(b_inv);
  return BasisChange(std::move(b), std::move(b_inv));
}

EquivalencePair hermitize(const ComplexMatrix& h, const AcceptConfig& config) {
  const AcceptabilityReport report = accept(h, config);
  if (!report.accepted) {
    std::string why;
    for (const std::string& r : report.reasons) {
      if (!why.empty()) why += "; ";
      why += r;
    }
    throw Error("hermitize: input rejected (" + why + ")");
  }

  ClusteredEigenbasis basis = clustered_eigenbasis(h);
  const int n = h.dim();

  // Phase convention: rotate each column so its largest-modulus component is
  // real and positive (ties go to the lowest index).
  for (int j = 0; j < n; ++j) {
    int arg_max = 0;
    double best = -1.0;
    for (int i = 0; i < n; ++i) {
      const double mag = std::abs(basis.s(i, j));
      if (mag > best) {
        best = mag;
        arg_max = i;
      }
    }
    const Complex pivot = basis.s(arg_max, j);
    if (pivot != Complex(0.0, 0.0)) {
      const Complex phase = std::abs(pivot) / pivot;
      for (int i = 0; i < n; ++i) basis.s(i, j) *= phase;
    }
  }

  std::vector<double> diag(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) diag[static_cast<size_t>(j)] = basis.values[static_cast<size_t>(j)].real();
  ComplexMatrix h_herm = ComplexMatrix::diagonal(std::span<const double>(diag));

  BasisChange change(basis.s);
  ComplexMatrix c = adjoint(change.b_inv()) * change.b_inv();
  ComplexMatrix ct = adjoint(c);
  c += ct;
  c *= Complex(0.5, 0.0);

  return EquivalencePair{h, std::move(h_herm), std::move(change), MetricOperator(std::move(c))};
}

std::pair<ComplexMatrix, MetricOperator> to_nonorthogonal(const ComplexMatrix& h_herm,
                                                          const BasisChange& b) {
  if (h_herm.dim() != b.dim()) throw DimensionError("to_nonorthogonal: dimension mismatch");
  const double scale = std::max(1.0, h_herm.frobenius_norm());
  if ((h_herm - adjoint(h_herm)).frobenius_norm() > 1e-9 * scale) {
    throw Error("to_nonorthogonal: input is not Hermitian");
  }
  ComplexMatrix h_prime = b.b_inv() * h_herm * b.b();
  ComplexMatrix c = adjoint(b.b()) * b.b();
  ComplexMatrix ct = adjoint(c);
  c += ct;
  c *= Complex(0.5, 0.0);
  return {std::move(h_prime), MetricOperator(std::move(c))};
}

ComplexVector transform_state(std::span<const Complex> v, const BasisChange& b,
                              TransformDirection direction) {
  if (v.size() != static_cast<size_t>(b.dim())) {
    throw DimensionError("transform_state: dimension mismatch");
  }
  return direction == TransformDirection::kForward ? b.b_inv() * v : b.b() * v;
}

ComplexMatrix transform_operator(const ComplexMatrix& o, const BasisChange& b) {
  if (o.dim() != b.dim()) throw DimensionError("transform_operator: dimension mismatch");
  return b.b_inv() * o * b.b();
}

bool spectra_equal(const ComplexMatrix& h1, const ComplexMatrix& h2, double tol) {
  if (h1.dim() != h2.dim()) throw DimensionError("spectra_equal: dimension mismatch");
  const Eigensystem e1 = eig(h1);
  const Eigensystem e2 = eig(h2);
  for (size_t k = 0; k < e1.values.size(); ++k) {
    if (std::abs(e1.values[k] - e2.values[k]) > tol) return false;
  }
  return true;
}

}  // namespace ptqm
