#include "moyal/faddeeva.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace moyal {

namespace {

using cplx = std::complex<double>;

// Double-double arithmetic, enough to sum the power series where the terms grow
// like exp(|z|^2) before cancelling.
struct DD {
  double hi = 0, lo = 0;
};

DD two_sum(double a, double b) {
  const double s = a + b;
  const double v = s - a;
  return {s, (a - (s - v)) + (b - v)};
}

DD two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

DD operator+(DD a, DD b) {
  DD s = two_sum(a.hi, b.hi);
  s.lo += a.lo + b.lo;
  return two_sum(s.hi, s.lo);
}

DD operator-(DD a) { return {-a.hi, -a.lo}; }
DD operator-(DD a, DD b) { return a + (-b); }

DD operator*(DD a, DD b) {
  DD p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return two_sum(p.hi, p.lo);
}

DD operator/(DD a, double b) {
  const double q1 = a.hi / b;
  DD r = a - two_prod(q1, b);
  const double q2 = r.hi / b;
  r = r - two_prod(q2, b);
  const double q3 = r.hi / b;
  return DD{q1, 0} + DD{q2, 0} + DD{q3, 0};
}

struct CDD {
  DD re, im;
};

CDD operator+(const CDD& a, const CDD& b) { return {a.re + b.re, a.im + b.im}; }
CDD operator*(const CDD& a, const CDD& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
CDD operator/(const CDD& a, double b) { return {a.re / b, a.im / b}; }

double magnitude(const CDD& a) { return std::abs(a.re.hi) + std::abs(a.im.hi); }

constexpr DD two_over_sqrt_pi{1.1283791670955126, 1.5335459613165880746e-17};

// sum_n (iz)^n / Gamma(n/2 + 1), even and odd chains separately.
cplx series(cplx z) {
  const double x = z.real(), y = z.imag();
  const CDD u{two_prod(y, y) - two_prod(x, x), -(two_prod(x, y) + two_prod(x, y))};
  CDD even{{1, 0}, {0, 0}};
  CDD odd = CDD{{-y, 0}, {x, 0}} * CDD{two_over_sqrt_pi, {0, 0}};
  CDD sum = even + odd;
  const double size = x * x + y * y;
  for (int m = 1; m < 400; ++m) {
    even = even * u / static_cast<double>(m);
    odd = odd * u / (m + 0.5);
    sum = sum + even + odd;
    if (m > size + 8 && magnitude(even) + magnitude(odd) < 1e-34 * magnitude(sum)) break;
  }
  return {sum.re.hi + sum.re.lo, sum.im.hi + sum.im.lo};
}

// Laplace continued fraction, valid for Im z >= 0 and large |z|.
cplx continued_fraction(cplx z) {
  cplx t = z;
  for (int k = 60; k >= 1; --k) t = z - (0.5 * k) / t;
  return cplx(0, 1) / (std::sqrt(std::numbers::pi) * t);
}

}  // namespace

cplx faddeeva(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw std::domain_error("faddeeva: non-finite argument");
  if (std::abs(z) < 5.5) return series(z);
  if (z.imag() >= 0) return continued_fraction(z);
  const cplx w = 2.0 * std::exp(-z * z) - continued_fraction(-z);
  if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
    throw std::overflow_error("faddeeva: result overflows");
  return w;
}

cplx erfc(cplx z) {
  if (z.real() < 0) return 2.0 - erfc(-z);
  return std::exp(-z * z) * faddeeva(cplx(-z.imag(), z.real()));
}

cplx erf(cplx z) {
  if (std::abs(z) < 0.5) {
    const cplx z2 = z * z;
    cplx term = z, sum = z;
    for (int n = 1; n < 40; ++n) {
      term *= -z2 / static_cast<double>(n);
      const cplx add = term / static_cast<double>(2 * n + 1);
      sum += add;
      if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    }
    return two_over_sqrt_pi.hi * sum;
  }
  if (z.real() < 0) return -erf(-z);
  return 1.0 - erfc(z);
}

}  // namespace moyal
