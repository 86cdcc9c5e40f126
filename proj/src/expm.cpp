#include "ptqm/linalg.hpp"

#include <cmath>
#include <string>

namespace ptqm {

namespace {

ComplexMatrix pade_sum_even(const ComplexMatrix* pows[], const double* b, int terms, int n) {
  // b[0]*I + b[2]*A2 + b[4]*A4 + ... packed as pows[0]=A2, pows[1]=A4, ...
  ComplexMatrix out = ComplexMatrix::identity(n);
  out *= Complex(b[0], 0.0);
  for (int k = 1; k <= terms; ++k) {
    ComplexMatrix term = *pows[k - 1];
    term *= Complex(b[2 * k], 0.0);
    out += term;
  }
  return out;
}

ComplexMatrix pade_sum_odd(const ComplexMatrix& a, const ComplexMatrix* pows[], const double* b,
                           int terms, int n) {
  // A * (b[1]*I + b[3]*A2 + b[5]*A4 + ...)
  ComplexMatrix inner = ComplexMatrix::identity(n);
  inner *= Complex(b[1], 0.0);
  for (int k = 1; k <= terms; ++k) {
    ComplexMatrix term = *pows[k - 1];
    term *= Complex(b[2 * k + 1], 0.0);
    inner += term;
  }
  return a * inner;
}

}  // namespace

ComplexMatrix expm(const ComplexMatrix& m) {
  const int n = m.dim();
  const double l1 = m.one_norm();
  if (!std::isfinite(l1)) throw Error("expm: non-finite input norm");

  // Degree thresholds for the [3/3] .. [13/13] Pade approximants.
  constexpr double theta3 = 1.495585217958292e-2;
  constexpr double theta5 = 2.539398330063230e-1;
  constexpr double theta7 = 9.504178996162932e-1;
  constexpr double theta9 = 2.097847961257068e+0;
  constexpr double theta13 = 5.371920351148152e+0;

  int squarings = 0;
  ComplexMatrix a = m;
  if (l1 > theta13) {
    squarings = static_cast<int>(std::ceil(std::log2(l1 / theta13)));
    if (squarings > 60) {
      throw Error("expm: input norm " + std::to_string(l1) + " too large (overflow)");
    }
    a *= Complex(std::ldexp(1.0, -squarings), 0.0);
  }

  ComplexMatrix u(n), v(n);
  const ComplexMatrix a2 = a * a;
  if (l1 <= theta3) {
    static const double b[] = {120.0, 60.0, 12.0, 1.0};
    const ComplexMatrix* pows[] = {&a2};
    u = pade_sum_odd(a, pows, b, 1, n);
    v = pade_sum_even(pows, b, 1, n);
  } else if (l1 <= theta5) {
    static const double b[] = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
    const ComplexMatrix a4 = a2 * a2;
    const ComplexMatrix* pows[] = {&a2, &a4};
    u = pade_sum_odd(a, pows, b, 2, n);
    v = pade_sum_even(pows, b, 2, n);
  } else if (l1 <= theta7) {
    static const double b[] = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                               25200.0,    1512.0,    56.0,      1.0};
    const ComplexMatrix a4 = a2 * a2;
    const ComplexMatrix a6 = a4 * a2;
    const ComplexMatrix* pows[] = {&a2, &a4, &a6};
    u = pade_sum_odd(a, pows, b, 3, n);
    v = pade_sum_even(pows, b, 3, n);
  } else if (l1 <= theta9) {
    static const double b[] = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0,
                               30270240.0,    2162160.0,    110880.0,     3960.0,
                               90.0,          1.0};
    const ComplexMatrix a4 = a2 * a2;
    const ComplexMatrix a6 = a4 * a2;
    const ComplexMatrix a8 = a6 * a2;
    const ComplexMatrix* pows[] = {&a2, &a4, &a6, &a8};
    u = pade_sum_odd(a, pows, b, 4, n);
    v = pade_sum_even(pows, b, 4, n);
  } else {
    static const double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                               1187353796428800.0,  129060195264000.0,   10559470521600.0,
                               670442572800.0,      33522128640.0,       1323241920.0,
                               40840800.0,          960960.0,            16380.0,
                               182.0,               1.0};
    const ComplexMatrix a4 = a2 * a2;
    const ComplexMatrix a6 = a4 * a2;
    // U = A (A6 (b13 A6 + b11 A4 + b9 A2) + b7 A6 + b5 A4 + b3 A2 + b1 I)
    ComplexMatrix w = Complex(b[13], 0.0) * a6;
    w += Complex(b[11], 0.0) * a4;
    w += Complex(b[9], 0.0) * a2;
    ComplexMatrix tmp = a6 * w;
    tmp += Complex(b[7], 0.0) * a6;
    tmp += Complex(b[5], 0.0) * a4;
    tmp += Complex(b[3], 0.0) * a2;
    ComplexMatrix id = ComplexMatrix::identity(n);
    tmp += Complex(b[1], 0.0) * id;
    u = a * tmp;
    // V = A6 (b12 A6 + b10 A4 + b8 A2) + b6 A6 + b4 A4 + b2 A2 + b0 I
    ComplexMatrix w2 = Complex(b[12], 0.0) * a6;
    w2 += Complex(b[10], 0.0) * a4;
    w2 += Complex(b[8], 0.0) * a2;
    v = a6 * w2;
    v += Complex(b[6], 0.0) * a6;
    v += Complex(b[4], 0.0) * a4;
    v += Complex(b[2], 0.0) * a2;
    v += Complex(b[0], 0.0) * id;
  }

  // exp(A) ~ (V - U)^{-1} (V + U)
  ComplexMatrix numer = v + u;
  ComplexMatrix denom = v - u;
  detail::LuFactors f;
  if (!detail::lu_factor(denom, f)) {
    throw Error("expm: Pade denominator singular (||m||_1 = " + std::to_string(l1) + ")");
  }
  ComplexMatrix r = detail::lu_solve_matrix(f, numer);
  for (int k = 0; k < squarings; ++k) r = r * r;
  if (!r.is_finite()) {
    throw Error("expm: overflow in result (||m||_1 = " + std::to_string(l1) + ")");
  }
  return r;
}

}  // namespace ptqm
