#ifndef PTQM_ACCEPTABILITY_HPP
#define PTQM_ACCEPTABILITY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ptqm/linalg.hpp"

namespace ptqm {

/// Hermitian positive-definite metric defining the physical inner product
/// <phi| c |psi>. Both properties are validated on construction.
class MetricOperator {
 public:
  explicit MetricOperator(ComplexMatrix c, double tol = 1e-8);
  const ComplexMatrix& c() const { return c_; }
  int dim() const { return c_.dim(); }

 private:
  ComplexMatrix c_;
};

struct AcceptConfig {
  double tol = 1e-8;
  double cond_cap = 1e8;
  double conservation_tol = 1e-8;
  double t_max = 10.0;
  int t_points = 16;
  int n_states = 8;
  std::uint64_t seed = 0;
};

/// Verdict against the four physical-acceptability criteria, with the
/// diagnostics gathered along the way. Checks run in order (real spectrum,
/// diagonalizable, metric/pseudo-Hermiticity, probability conservation) and
/// short-circuit on the first failure.
struct AcceptabilityReport {
  bool real_spectrum = false;
  double max_imag = 0.0;
  bool diagonalizable = false;
  double eigvec_cond = 0.0;
  std::optional<MetricOperator> metric;
  bool pseudo_hermitian = false;
  bool probability_conserving = false;
  bool accepted = false;
  std::vector<std::string> reasons;

  const char* verdict() const { return accepted ? "accepted" : "rejected"; }
};

/// Criterion 1: max_j |Im lambda_j| <= tol * max(1, ||h||_F).
std::pair<bool, double> check_real_spectrum(const ComplexMatrix& h, double tol = 1e-8);

/// Criterion 2: eigenvector matrix numerically full rank with condition
/// number at most cond_cap. Returns (verdict, condition number).
std::pair<bool, double> check_diagonalizable(const ComplexMatrix& h, double cond_cap = 1e8);

/// Eigenvector matrix with unit columns and each (near-)degenerate cluster
/// orthonormalized by modified Gram-Schmidt. Values sorted as in eig().
/// Clusters are eigenvalues within 1e-7 * ||h||_F of their neighbor.
struct ClusteredEigenbasis {
  ComplexVector values;
  ComplexMatrix s;
  std::vector<std::pair<int, int>> clusters;  // [begin, end) column ranges
};
ClusteredEigenbasis clustered_eigenbasis(const ComplexMatrix& h);

/// Criterion 3 construction: the unique metric making the computed
/// eigenvectors orthonormal, c = (S^-1)^H S^-1. Requires a real spectrum and
/// a diagonalizable h.
MetricOperator build_metric(const ComplexMatrix& h);

/// ||o^H c - c o||_F <= tol * ||c||_F * ||o||_F: o is Hermitian with respect
/// to the inner product defined by c.
bool is_hermitian_wrt(const ComplexMatrix& o, const MetricOperator& c, double tol = 1e-8);

/// ||u^H c u - c||_F <= tol * ||c||_F: u preserves the inner product.
bool is_unitary_wrt(const ComplexMatrix& u, const MetricOperator& c, double tol = 1e-8);

/// Criterion 4: <psi(t)| c |psi(t)> stays within tol (relative) of its
/// initial value for every sampled state and time, psi(t) = expm(-i h t) psi0.
bool check_probability_conservation(const ComplexMatrix& h, const MetricOperator& c,
                                    std::span<const double> t_grid,
                                    std::span<const ComplexVector> states, double tol = 1e-8);

/// Full pipeline. Never throws for well-formed input; failures land in the
/// report's reasons.
AcceptabilityReport accept(const ComplexMatrix& h, const AcceptConfig& config = {});

}  // namespace ptqm

#endif  // PTQM_ACCEPTABILITY_HPP
