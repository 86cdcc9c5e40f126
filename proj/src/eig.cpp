#include "ptqm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ptqm {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Givens rotation G = [[c, s], [-conj(s), c]] with real c, c^2 + |s|^2 = 1,
// mapping (a, b) to (r, 0).
void rotg(Complex a, Complex b, double& c, Complex& s, Complex& r) {
  const double an = std::abs(a);
  const double bn = std::abs(b);
  if (bn == 0.0) {
    c = 1.0;
    s = 0.0;
    r = a;
    return;
  }
  if (an == 0.0) {
    c = 0.0;
    s = std::conj(b) / bn;
    r = bn;
    return;
  }
  const double rho = std::hypot(an, bn);
  const Complex phase = a / an;
  c = an / rho;
  s = phase * std::conj(b) / rho;
  r = phase * rho;
}

// Householder reduction to upper Hessenberg form; accumulates the unitary Q
// with A_in = Q * H * Q^H.
void hessenberg(ComplexMatrix& a, ComplexMatrix& q) {
  const int n = a.dim();
  q = ComplexMatrix::identity(n);
  ComplexVector v(static_cast<size_t>(n));
  for (int k = 0; k + 2 < n; ++k) {
    const int m = n - k - 1;  // length of the column tail below row k
    double xnorm = 0.0;
    for (int i = k + 1; i < n; ++i) xnorm += std::norm(a(i, k));
    xnorm = std::sqrt(xnorm);
    if (xnorm == 0.0) continue;

    const Complex x0 = a(k + 1, k);
    const Complex phase = (x0 == Complex(0.0, 0.0)) ? Complex(1.0, 0.0) : x0 / std::abs(x0);
    const Complex alpha = -phase * xnorm;

    double vnorm2 = 0.0;
    for (int i = 0; i < m; ++i) {
      v[static_cast<size_t>(i)] = a(k + 1 + i, k);
      if (i == 0) v[0] -= alpha;
      vnorm2 += std::norm(v[static_cast<size_t>(i)]);
    }
    if (vnorm2 == 0.0) continue;
    const double tau = 2.0 / vnorm2;

    // A <- P A  (rows k+1..n-1)
    for (int j = k; j < n; ++j) {
      Complex sum = 0.0;
      for (int i = 0; i < m; ++i) sum += std::conj(v[static_cast<size_t>(i)]) * a(k + 1 + i, j);
      sum *= tau;
      for (int i = 0; i < m; ++i) a(k + 1 + i, j) -= sum * v[static_cast<size_t>(i)];
    }
    // A <- A P  (cols k+1..n-1)
    for (int i = 0; i < n; ++i) {
      Complex sum = 0.0;
      for (int j = 0; j < m; ++j) sum += a(i, k + 1 + j) * v[static_cast<size_t>(j)];
      sum *= tau;
      for (int j = 0; j < m; ++j) a(i, k + 1 + j) -= sum * std::conj(v[static_cast<size_t>(j)]);
    }
    // Q <- Q P
    for (int i = 0; i < n; ++i) {
      Complex sum = 0.0;
      for (int j = 0; j < m; ++j) sum += q(i, k + 1 + j) * v[static_cast<size_t>(j)];
      sum *= tau;
      for (int j = 0; j < m; ++j) q(i, k + 1 + j) -= sum * std::conj(v[static_cast<size_t>(j)]);
    }
    a(k + 1, k) = alpha;
    for (int i = k + 2; i < n; ++i) a(i, k) = 0.0;
  }
}

// Eigenvalue of the trailing 2x2 of the active block closest to A(hi, hi).
Complex wilkinson_shift(const ComplexMatrix& a, int hi) {
  const Complex p = a(hi - 1, hi - 1);
  const Complex b = a(hi - 1, hi);
  const Complex c = a(hi, hi - 1);
  const Complex d = a(hi, hi);
  const Complex t = 0.5 * (p - d);
  const Complex rad = std::sqrt(t * t + b * c);
  const Complex mu1 = t + rad;
  const Complex mu2 = t - rad;
  const Complex big = (std::abs(mu1) >= std::abs(mu2)) ? mu1 : mu2;
  if (big == Complex(0.0, 0.0)) return d;
  return d - (b * c) / big;  // smaller root via the product of the two
}

// One implicit single-shift QR sweep on the Hessenberg block [lo, hi],
// updating the full rows/columns so the Schur form of the whole matrix is
// maintained, and accumulating the rotations into q.
void qr_sweep(ComplexMatrix& a, ComplexMatrix& q, int lo, int hi, Complex shift) {
  const int n = a.dim();
  Complex x = a(lo, lo) - shift;
  Complex y = a(lo + 1, lo);
  for (int k = lo; k < hi; ++k) {
    if (k > lo) {
      x = a(k, k - 1);
      y = a(k + 1, k - 1);
    }
    double c;
    Complex s, r;
    rotg(x, y, c, s, r);
    if (k > lo) {
      a(k, k - 1) = r;
      a(k + 1, k - 1) = 0.0;
    }
    for (int j = k; j < n; ++j) {
      const Complex t1 = a(k, j);
      const Complex t2 = a(k + 1, j);
      a(k, j) = c * t1 + s * t2;
      a(k + 1, j) = -std::conj(s) * t1 + c * t2;
    }
    const int ilast = std::min(k + 2, hi);
    for (int i = 0; i <= ilast; ++i) {
      const Complex t1 = a(i, k);
      const Complex t2 = a(i, k + 1);
      a(i, k) = c * t1 + std::conj(s) * t2;
      a(i, k + 1) = -s * t1 + c * t2;
    }
    for (int i = 0; i < n; ++i) {
      const Complex t1 = q(i, k);
      const Complex t2 = q(i, k + 1);
      q(i, k) = c * t1 + std::conj(s) * t2;
      q(i, k + 1) = -s * t1 + c * t2;
    }
  }
}

// Reduce the Hessenberg matrix to upper triangular (Schur) form in place.
// Throws ConvergenceError carrying the worst remaining subdiagonal if the
// sweep budget runs out.
void schur(ComplexMatrix& a, ComplexMatrix& q, int max_sweeps) {
  const int n = a.dim();
  int ihi = n - 1;
  int iter_at_hi = 0;
  int total = 0;
  while (ihi > 0) {
    // Locate the start of the active block: first negligible subdiagonal
    // walking up from ihi.
    int ilo = ihi;
    while (ilo > 0) {
      double scale = std::abs(a(ilo - 1, ilo - 1)) + std::abs(a(ilo, ilo));
      if (scale == 0.0) scale = a.frobenius_norm();
      if (std::abs(a(ilo, ilo - 1)) <= kEps * scale) {
        a(ilo, ilo - 1) = 0.0;
        break;
      }
      --ilo;
    }
    if (ilo == ihi) {
      --ihi;
      iter_at_hi = 0;
      continue;
    }
    if (++total > max_sweeps) {
      double worst = 0.0;
      for (int i = 1; i < n; ++i) worst = std::max(worst, std::abs(a(i, i - 1)));
      throw ConvergenceError("eig: QR iteration did not converge within " +
                                 std::to_string(max_sweeps) + " sweeps",
                             worst);
    }
    ++iter_at_hi;
    Complex shift;
    if (iter_at_hi % 10 == 0) {
      // Exceptional shift to break rare symmetric stagnation.
      shift = a(ihi, ihi) + 0.75 * std::abs(a(ihi, ihi - 1));
    } else {
      shift = wilkinson_shift(a, ihi);
    }
    qr_sweep(a, q, ilo, ihi, shift);
  }
}

// Eigenvectors of the upper triangular t by back-substitution; column k of
// the result pairs with t(k, k). Small denominators from (near-)repeated
// diagonal entries are floored, which turns defective directions into
// numerically parallel columns instead of a crash.
ComplexMatrix triangular_eigenvectors(const ComplexMatrix& t) {
  const int n = t.dim();
  const double tnorm = t.frobenius_norm();
  ComplexMatrix v(n);
  ComplexVector w(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    std::fill(w.begin(), w.end(), Complex(0.0, 0.0));
    w[static_cast<size_t>(k)] = 1.0;
    const Complex lambda = t(k, k);
    double smin = kEps * std::max(std::abs(lambda), tnorm);
    if (smin == 0.0) smin = std::numeric_limits<double>::min();
    for (int j = k - 1; j >= 0; --j) {
      Complex num = 0.0;
      for (int m = j + 1; m <= k; ++m) num += t(j, m) * w[static_cast<size_t>(m)];
      Complex den = t(j, j) - lambda;
      if (std::abs(den) < smin) den = smin;
      w[static_cast<size_t>(j)] = -num / den;
      const double mag = std::abs(w[static_cast<size_t>(j)]);
      if (mag > 1e250) {
        const double rescale = 1.0 / mag;
        for (int m = j; m <= k; ++m) w[static_cast<size_t>(m)] *= rescale;
      }
    }
    for (int i = 0; i < n; ++i) v(i, k) = w[static_cast<size_t>(i)];
  }
  return v;
}

}  // namespace

Eigensystem eig(const ComplexMatrix& m, double rtol, int max_sweeps) {
  const int n = m.dim();
  if (!m.is_finite()) throw Error("eig: non-finite input");
  if (max_sweeps <= 0) max_sweeps = 30 * n;

  Eigensystem out;
  if (n == 1) {
    out.values = {m(0, 0)};
    out.vectors = ComplexMatrix::identity(1);
    return out;
  }

  ComplexMatrix t = m;
  ComplexMatrix q;
  hessenberg(t, q);
  schur(t, q, max_sweeps);

  ComplexVector values(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) values[static_cast<size_t>(k)] = t(k, k);

  const ComplexMatrix vt = triangular_eigenvectors(t);
  ComplexMatrix vecs = q * vt;

  // Deterministic order: (Re, Im), ties by original index.
  std::vector<int> idx(static_cast<size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    const Complex za = values[static_cast<size_t>(a)];
    const Complex zb = values[static_cast<size_t>(b)];
    if (za.real() != zb.real()) return za.real() < zb.real();
    if (za.imag() != zb.imag()) return za.imag() < zb.imag();
    return a < b;
  });

  out.values.resize(static_cast<size_t>(n));
  out.vectors = ComplexMatrix(n);
  for (int j = 0; j < n; ++j) {
    const int src = idx[static_cast<size_t>(j)];
    out.values[static_cast<size_t>(j)] = values[static_cast<size_t>(src)];
    double colnorm = 0.0;
    for (int i = 0; i < n; ++i) colnorm += std::norm(vecs(i, src));
    colnorm = std::sqrt(colnorm);
    if (colnorm == 0.0) throw Error("eig: zero eigenvector column");
    for (int i = 0; i < n; ++i) out.vectors(i, j) = vecs(i, src) / colnorm;
  }

  // Post-condition: residual bound relative to ||m||_F.
  const double mnorm = m.frobenius_norm();
  double worst = 0.0;
  for (int j = 0; j < n; ++j) {
    double res = 0.0;
    for (int i = 0; i < n; ++i) {
      Complex r = -out.values[static_cast<size_t>(j)] * out.vectors(i, j);
      for (int k = 0; k < n; ++k) r += m(i, k) * out.vectors(k, j);
      res += std::norm(r);
    }
    worst = std::max(worst, std::sqrt(res));
  }
  if (worst > rtol * mnorm) {
    throw ConvergenceError("eig: residual " + std::to_string(worst) +
                               " exceeds bound after convergence",
                           worst);
  }
  return out;
}

}  // namespace ptqm
