#include "ptqm/antilinear.hpp"

#include <algorithm>
#include <cmath>

namespace ptqm {

namespace {

ComplexVector conj_vec(std::span<const Complex> v) {
  ComplexVector out(v.size());
  for (size_t k = 0; k < v.size(); ++k) out[k] = std::conj(v[k]);
  return out;
}

// Chain-clustering of the sorted eigenvalues: indices [begin, end) of each
// group of (near-)degenerate values.
std::vector<std::pair<int, int>> cluster_ranges(const ComplexVector& values, double gap) {
  std::vector<std::pair<int, int>> out;
  const int n = static_cast<int>(values.size());
  int start = 0;
  for (int i = 1; i <= n; ++i) {
    if (i == n || std::abs(values[static_cast<size_t>(i)] - values[static_cast<size_t>(i - 1)]) > gap) {
      out.emplace_back(start, i);
      start = i;
    }
  }
  return out;
}

}  // namespace

ComplexVector apply(const AntilinearOperator& a, std::span<const Complex> v) {
  if (static_cast<size_t>(a.m.dim()) != v.size()) {
    throw DimensionError("antilinear apply: dimension mismatch");
  }
  return a.m * std::span<const Complex>(conj_vec(v));
}

bool is_involution(const AntilinearOperator& a, double tol) {
  const ComplexMatrix prod = a.m * conjugate(a.m);
  return (prod - ComplexMatrix::identity(a.m.dim())).frobenius_norm() <= tol;
}

bool commutes_with(const ComplexMatrix& h, const AntilinearOperator& a, double tol) {
  if (h.dim() != a.m.dim()) throw DimensionError("commutes_with: dimension mismatch");
  const double resid = (h * a.m - a.m * conjugate(h)).frobenius_norm();
  return resid <= tol * h.frobenius_norm();
}

SharedSpectrumReport shared_spectrum(const ComplexMatrix& h, const AntilinearOperator& a,
                                     double tol) {
  if (h.dim() != a.m.dim()) throw DimensionError("shared_spectrum: dimension mismatch");
  if (!commutes_with(h, a, tol)) {
    throw Error("shared_spectrum: h does not commute with the anti-linear operator");
  }
  {
    detail::LuFactors f;
    if (!detail::lu_factor(a.m, f)) {
      throw Error("shared_spectrum: anti-linear operator is singular (zero eigenvalue)");
    }
  }

  const Eigensystem es = eig(h);
  const int n = h.dim();
  const double svcond = cond(es.vectors);
  if (!(svcond <= 1e8)) {
    throw DefectiveMatrixError(
        "shared_spectrum: h is defective (eigenvector matrix condition " +
        std::to_string(svcond) + ")");
  }

  const double hnorm = h.frobenius_norm();
  const double gap = 1e-7 * std::max(1.0, hnorm);
  SharedSpectrumReport report;
  report.records.resize(static_cast<size_t>(n));

  for (auto [begin, end] : cluster_ranges(es.values, gap)) {
    const int size = end - begin;
    // Orthonormal basis of the cluster's eigenspace (modified Gram-Schmidt).
    std::vector<ComplexVector> basis;
    for (int j = begin; j < end; ++j) {
      ComplexVector u(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) u[static_cast<size_t>(i)] = es.vectors(i, j);
      for (const ComplexVector& b : basis) {
        const Complex proj = dot(b, u);
        for (int i = 0; i < n; ++i) u[static_cast<size_t>(i)] -= proj * b[static_cast<size_t>(i)];
      }
      const double un = norm2(u);
      if (un > 0.0) {
        for (Complex& z : u) z /= un;
        basis.push_back(std::move(u));
      }
    }

    bool cluster_invariant = true;
    std::vector<double> residuals(static_cast<size_t>(size), 0.0);
    std::vector<Complex> raw_eigs(static_cast<size_t>(size), Complex(0.0, 0.0));
    for (int j = begin; j < end; ++j) {
      ComplexVector v(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = es.vectors(i, j);
      const ComplexVector w = apply(a, v);
      const double wn = norm2(w);
      double inside = 0.0;
      for (const ComplexVector& b : basis) inside += std::norm(dot(b, w));
      const double cos2 = (wn > 0.0) ? inside / (wn * wn) : 0.0;
      if (cos2 < 1.0 - tol) cluster_invariant = false;
      residuals[static_cast<size_t>(j - begin)] = std::sqrt(std::max(0.0, 1.0 - cos2));
      raw_eigs[static_cast<size_t>(j - begin)] = dot(v, w);  // ||v|| = 1
    }

    for (int j = begin; j < end; ++j) {
      SharedRecord& rec = report.records[static_cast<size_t>(j)];
      rec.eigenvalue = es.values[static_cast<size_t>(j)];
      rec.is_shared = cluster_invariant;
      rec.residual = residuals[static_cast<size_t>(j - begin)];
      if (cluster_invariant) rec.antilinear_eigenvalue = raw_eigs[static_cast<size_t>(j - begin)];
    }
  }

  report.unbroken =
      std::all_of(report.records.begin(), report.records.end(),
                  [](const SharedRecord& r) { return r.is_shared; });

  // Reality theorem: a shared eigenvector of a nonsingular anti-linear
  // symmetry forces a real eigenvalue.
  const double reality_tol = tol * std::max(1.0, hnorm);
  for (const SharedRecord& r : report.records) {
    if (r.is_shared && std::abs(r.eigenvalue.imag()) > reality_tol) {
      throw Error("shared_spectrum: shared eigenvector with complex eigenvalue (|Im| = " +
                  std::to_string(std::abs(r.eigenvalue.imag())) + ")");
    }
  }
  return report;
}

}  // namespace ptqm
