#include "ptqm/acceptability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace ptqm {

MetricOperator::MetricOperator(ComplexMatrix c, double tol) : c_(std::move(c)) {
  const double scale = std::max(1.0, c_.frobenius_norm());
  if ((c_ - adjoint(c_)).frobenius_norm() > tol * scale) {
    throw Error("MetricOperator: matrix is not Hermitian");
  }
  const Eigensystem es = eig(c_);
  double min_eig = std::numeric_limits<double>::infinity();
  for (Complex lambda : es.values) min_eig = std::min(min_eig, lambda.real());
  if (!(min_eig > 0.0)) {
    throw Error("MetricOperator: matrix is not positive definite (min eigenvalue " +
                std::to_string(min_eig) + ")");
  }
}

std::pair<bool, double> check_real_spectrum(const ComplexMatrix& h, double tol) {
  const Eigensystem es = eig(h);
  double max_imag = 0.0;
  for (Complex lambda : es.values) max_imag = std::max(max_imag, std::abs(lambda.imag()));
  return {max_imag <= tol * std::max(1.0, h.frobenius_norm()), max_imag};
}

std::pair<bool, double> check_diagonalizable(const ComplexMatrix& h, double cond_cap) {
  const Eigensystem es = eig(h);
  const double c = cond(es.vectors);
  return {std::isfinite(c) && c <= cond_cap, c};
}

ClusteredEigenbasis clustered_eigenbasis(const ComplexMatrix& h) {
  const Eigensystem es = eig(h);
  const int n = h.dim();
  const double gap = 1e-7 * h.frobenius_norm();

  ClusteredEigenbasis out;
  out.values = es.values;
  out.s = es.vectors;

  int start = 0;
  for (int i = 1; i <= n; ++i) {
    if (i == n ||
        std::abs(out.values[static_cast<size_t>(i)] - out.values[static_cast<size_t>(i - 1)]) > gap) {
      out.clusters.emplace_back(start, i);
      start = i;
    }
  }

  // Modified Gram-Schmidt inside each degenerate cluster; the span is the
  // eigenspace, so the result still consists of eigenvectors.
  for (auto [begin, end] : out.clusters) {
    if (end - begin < 2) continue;
    for (int j = begin; j < end; ++j) {
      for (int k = begin; k < j; ++k) {
        Complex proj = 0.0;
        for (int i = 0; i < n; ++i) proj += std::conj(out.s(i, k)) * out.s(i, j);
        for (int i = 0; i < n; ++i) out.s(i, j) -= proj * out.s(i, k);
      }
      double colnorm = 0.0;
      for (int i = 0; i < n; ++i) colnorm += std::norm(out.s(i, j));
      colnorm = std::sqrt(colnorm);
      if (colnorm == 0.0) {
        throw Error("clustered_eigenbasis: degenerate cluster is rank-deficient");
      }
      for (int i = 0; i < n; ++i) out.s(i, j) /= colnorm;
    }
  }
  return out;
}

MetricOperator build_metric(const ComplexMatrix& h) {
  auto [real_ok, max_imag] = check_real_spectrum(h);
  if (!real_ok) {
    throw Error("build_metric: complex spectrum (max |Im| = " + std::to_string(max_imag) + ")");
  }
  // Defectiveness must be judged on the raw eigenvectors; Gram-Schmidt
  // inside a defective cluster would manufacture a well-conditioned basis of
  // non-eigenvectors and mask it.
  auto [diag_ok, svcond] = check_diagonalizable(h);
  if (!diag_ok) {
    throw Error("build_metric: h is defective or nearly so (eigenvector condition " +
                std::to_string(svcond) + ")");
  }
  const ClusteredEigenbasis basis = clustered_eigenbasis(h);
  const ComplexMatrix s_inv = inverse(basis.s);
  ComplexMatrix c = adjoint(s_inv) * s_inv;
  // Symmetrize away the rounding skew.
  ComplexMatrix ct = adjoint(c);
  c += ct;
  c *= Complex(0.5, 0.0);
  return MetricOperator(std::move(c));
}

bool is_hermitian_wrt(const ComplexMatrix& o, const MetricOperator& c, double tol) {
  if (o.dim() != c.dim()) throw DimensionError("is_hermitian_wrt: dimension mismatch");
  const double resid = (adjoint(o) * c.c() - c.c() * o).frobenius_norm();
  return resid <= tol * c.c().frobenius_norm() * o.frobenius_norm();
}

bool is_unitary_wrt(const ComplexMatrix& u, const MetricOperator& c, double tol) {
  if (u.dim() != c.dim()) throw DimensionError("is_unitary_wrt: dimension mismatch");
  const double resid = (adjoint(u) * c.c() * u - c.c()).frobenius_norm();
  return resid <= tol * c.c().frobenius_norm();
}

bool check_probability_conservation(const ComplexMatrix& h, const MetricOperator& c,
                                    std::span<const double> t_grid,
                                    std::span<const ComplexVector> states, double tol) {
  if (h.dim() != c.dim()) throw DimensionError("check_probability_conservation: dimension mismatch");
  for (const ComplexVector& psi0 : states) {
    if (psi0.size() != static_cast<size_t>(h.dim())) {
      throw DimensionError("check_probability_conservation: state dimension mismatch");
    }
    const Complex n0 = dot(psi0, c.c() * std::span<const Complex>(psi0));
    for (double t : t_grid) {
      const ComplexMatrix u = expm(Complex(0.0, -t) * h);
      const ComplexVector psit = u * std::span<const Complex>(psi0);
      const Complex nt = dot(psit, c.c() * std::span<const Complex>(psit));
      if (std::abs(nt - n0) > tol * std::abs(n0)) return false;
    }
  }
  return true;
}

AcceptabilityReport accept(const ComplexMatrix& h, const AcceptConfig& config) {
  AcceptabilityReport report;

  std::tie(report.real_spectrum, report.max_imag) = check_real_spectrum(h, config.tol);
  if (!report.real_spectrum) {
    report.reasons.push_back("complex spectrum");
    return report;
  }

  std::tie(report.diagonalizable, report.eigvec_cond) = check_diagonalizable(h, config.cond_cap);
  if (!report.diagonalizable) {
    report.reasons.push_back("not diagonalizable");
    return report;
  }

  report.metric = build_metric(h);
  report.pseudo_hermitian = is_hermitian_wrt(h, *report.metric, config.tol);
  if (!report.pseudo_hermitian) {
    report.reasons.push_back("not pseudo-Hermitian under the built metric");
    return report;
  }

  std::vector<double> t_grid(static_cast<size_t>(config.t_points));
  for (int k = 0; k < config.t_points; ++k) {
    t_grid[static_cast<size_t>(k)] = config.t_max * k / std::max(1, config.t_points - 1);
  }
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<ComplexVector> states(static_cast<size_t>(config.n_states));
  for (ComplexVector& psi : states) {
    psi.resize(static_cast<size_t>(h.dim()));
    for (Complex& z : psi) z = Complex(gauss(rng), gauss(rng));
  }

  bool conserving = check_probability_conservation(h, *report.metric, t_grid, states,
                                                   config.conservation_tol);
  if (conserving) {
    // Second half of criterion 4: the evolution operator itself preserves
    // the metric inner product.
    for (double t : t_grid) {
      const ComplexMatrix u = expm(Complex(0.0, -t) * h);
      if (!is_unitary_wrt(u, *report.metric, config.conservation_tol)) {
        conserving = false;
        break;
      }
    }
  }
  report.probability_conserving = conserving;
  if (!conserving) {
    report.reasons.push_back("probability not conserved");
    return report;
  }

  report.accepted = true;
  return report;
}

}  // namespace ptqm
