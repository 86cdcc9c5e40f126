#include "ptqm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ptqm {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require_square_pair(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.dim() != b.dim()) {
    throw DimensionError(std::string(op) + ": dimension mismatch (" +
                         std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(int dim) : dim_(dim) {
  if (dim < 1) throw DimensionError("ComplexMatrix: dim must be positive");
  entries_.assign(static_cast<size_t>(dim) * dim, Complex(0.0, 0.0));
}

ComplexMatrix::ComplexMatrix(int dim, ComplexVector entries)
    : dim_(dim), entries_(std::move(entries)) {
  if (dim < 1) throw DimensionError("ComplexMatrix: dim must be positive");
  if (entries_.size() != static_cast<size_t>(dim) * dim) {
    throw DimensionError("ComplexMatrix: entries length " + std::to_string(entries_.size()) +
                         " does not match dim*dim = " + std::to_string(dim * dim));
  }
  for (const Complex& z : entries_) {
    if (!finite(z)) throw Error("ComplexMatrix: non-finite entry");
  }
}

ComplexMatrix ComplexMatrix::identity(int dim) {
  ComplexMatrix m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> d) {
  ComplexMatrix m(static_cast<int>(d.size()));
  for (int i = 0; i < m.dim(); ++i) m(i, i) = d[static_cast<size_t>(i)];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> d) {
  ComplexMatrix m(static_cast<int>(d.size()));
  for (int i = 0; i < m.dim(); ++i) m(i, i) = d[static_cast<size_t>(i)];
  return m;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const Complex& z : entries_) s += std::norm(z);
  return std::sqrt(s);
}

double ComplexMatrix::one_norm() const {
  double best = 0.0;
  for (int j = 0; j < dim_; ++j) {
    double col = 0.0;
    for (int i = 0; i < dim_; ++i) col += std::abs((*this)(i, j));
    best = std::max(best, col);
  }
  return best;
}

bool ComplexMatrix::is_finite() const {
  return std::all_of(entries_.begin(), entries_.end(), [](Complex z) { return finite(z); });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  require_square_pair(*this, rhs, "operator+");
  for (size_t k = 0; k < entries_.size(); ++k) entries_[k] += rhs.entries_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  require_square_pair(*this, rhs, "operator-");
  for (size_t k = 0; k < entries_.size(); ++k) entries_[k] -= rhs.entries_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
  for (Complex& z : entries_) z *= scale;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  require_square_pair(lhs, rhs, "operator*");
  const int n = lhs.dim();
  ComplexMatrix out(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const Complex a = lhs(i, k);
      if (a == Complex(0.0, 0.0)) continue;
      for (int j = 0; j < n; ++j) out(i, j) += a * rhs(k, j);
    }
  }
  return out;
}

ComplexMatrix operator*(Complex scale, ComplexMatrix m) { return m *= scale; }

ComplexVector operator*(const ComplexMatrix& m, std::span<const Complex> v) {
  if (static_cast<size_t>(m.dim()) != v.size()) {
    throw DimensionError("matrix*vector: dimension mismatch");
  }
  const int n = m.dim();
  ComplexVector out(static_cast<size_t>(n), Complex(0.0, 0.0));
  for (int i = 0; i < n; ++i) {
    Complex s = 0.0;
    for (int j = 0; j < n; ++j) s += m(i, j) * v[static_cast<size_t>(j)];
    out[static_cast<size_t>(i)] = s;
  }
  return out;
}

ComplexMatrix adjoint(const ComplexMatrix& m) {
  ComplexMatrix out(m.dim());
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) out(i, j) = std::conj(m(j, i));
  return out;
}

ComplexMatrix conjugate(const ComplexMatrix& m) {
  ComplexMatrix out(m.dim());
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) out(i, j) = std::conj(m(i, j));
  return out;
}

ComplexMatrix transpose(const ComplexMatrix& m) {
  ComplexMatrix out(m.dim());
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) out(i, j) = m(j, i);
  return out;
}

Complex dot(std::span<const Complex> u, std::span<const Complex> v) {
  if (u.size() != v.size()) throw DimensionError("dot: dimension mismatch");
  Complex s = 0.0;
  for (size_t k = 0; k < u.size(); ++k) s += std::conj(u[k]) * v[k];
  return s;
}

double norm2(std::span<const Complex> v) {
  double s = 0.0;
  for (const Complex& z : v) s += std::norm(z);
  return std::sqrt(s);
}

namespace detail {

bool lu_factor(const ComplexMatrix& m, LuFactors& out) {
  const int n = m.dim();
  out.lu = m;
  out.perm.resize(static_cast<size_t>(n));
  std::iota(out.perm.begin(), out.perm.end(), 0);
  out.min_pivot = std::numeric_limits<double>::infinity();
  out.max_pivot = 0.0;

  double max_entry = 0.0;
  for (const Complex& z : m.entries()) max_entry = std::max(max_entry, std::abs(z));
  const double tiny = n * std::numeric_limits<double>::epsilon() * max_entry;

  ComplexMatrix& a = out.lu;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(a(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double cand = std::abs(a(i, k));
      if (cand > best) {
        best = cand;
        piv = i;
      }
    }
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(out.perm[static_cast<size_t>(k)], out.perm[static_cast<size_t>(piv)]);
    }
    const double pmag = std::abs(a(k, k));
    out.min_pivot = std::min(out.min_pivot, pmag);
    out.max_pivot = std::max(out.max_pivot, pmag);
    if (pmag <= tiny || pmag == 0.0) return false;
    const Complex inv_piv = 1.0 / a(k, k);
    for (int i = k + 1; i < n; ++i) {
      const Complex l = a(i, k) * inv_piv;
      a(i, k) = l;
      if (l == Complex(0.0, 0.0)) continue;
      for (int j = k + 1; j < n; ++j) a(i, j) -= l * a(k, j);
    }
  }
  return true;
}

ComplexVector lu_solve(const LuFactors& f, std::span<const Complex> rhs) {
  const int n = f.lu.dim();
  if (static_cast<size_t>(n) != rhs.size()) throw DimensionError("lu_solve: dimension mismatch");
  ComplexVector x(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) x[static_cast<size_t>(i)] = rhs[static_cast<size_t>(f.perm[static_cast<size_t>(i)])];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) x[static_cast<size_t>(i)] -= f.lu(i, j) * x[static_cast<size_t>(j)];
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) x[static_cast<size_t>(i)] -= f.lu(i, j) * x[static_cast<size_t>(j)];
    x[static_cast<size_t>(i)] /= f.lu(i, i);
  }
  return x;
}

ComplexMatrix lu_solve_matrix(const LuFactors& f, const ComplexMatrix& rhs) {
  const int n = f.lu.dim();
  require_square_pair(f.lu, rhs, "lu_solve_matrix");
  ComplexMatrix out(n);
  ComplexVector col(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) col[static_cast<size_t>(i)] = rhs(i, j);
    ComplexVector x = lu_solve(f, col);
    for (int i = 0; i < n; ++i) out(i, j) = x[static_cast<size_t>(i)];
  }
  return out;
}

}  // namespace detail

ComplexMatrix inverse(const ComplexMatrix& m) {
  detail::LuFactors f;
  if (!detail::lu_factor(m, f)) {
    throw SingularMatrixError("inverse: matrix singular to working precision", cond(m));
  }
  return detail::lu_solve_matrix(f, ComplexMatrix::identity(m.dim()));
}

std::vector<double> singular_values(const ComplexMatrix& m) {
  // One-sided Jacobi: rotate column pairs until mutually orthogonal, then
  // read the singular values off as column norms. Keeps full relative
  // accuracy for tiny singular values, which the m^H m route would lose.
  const int n = m.dim();
  ComplexMatrix a = m;
  const double tol = 1e2 * std::numeric_limits<double>::epsilon();
  const int max_sweeps = 60;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double app = 0.0, aqq = 0.0;
        Complex apq = 0.0;
        for (int i = 0; i < n; ++i) {
          app += std::norm(a(i, p));
          aqq += std::norm(a(i, q));
          apq += std::conj(a(i, p)) * a(i, q);
        }
        const double off = std::abs(apq);
        if (off <= tol * std::sqrt(app * aqq) || off == 0.0) continue;
        rotated = true;
        // Phase-align the pair, then apply the real Jacobi rotation.
        const Complex phase = apq / off;
        const double tau = (aqq - app) / (2.0 * off);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * cs;
        for (int i = 0; i < n; ++i) {
          const Complex vp = a(i, p);
          const Complex vq = a(i, q) * std::conj(phase);
          a(i, p) = cs * vp - sn * vq;
          a(i, q) = (sn * vp + cs * vq) * phase;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sigma(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::norm(a(i, j));
    sigma[static_cast<size_t>(j)] = std::sqrt(s);
  }
  std::sort(sigma.begin(), sigma.end(), std::greater<double>());
  return sigma;
}

double cond(const ComplexMatrix& m) {
  const std::vector<double> sigma = singular_values(m);
  const double smax = sigma.front();
  const double smin = sigma.back();
  if (smax == 0.0 || smin == 0.0) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

}  // namespace ptqm
