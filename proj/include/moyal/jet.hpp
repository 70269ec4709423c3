#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <type_traits>

#include <Eigen/Core>

#include "moyal/faddeeva.hpp"
#include "moyal/grid.hpp"

namespace moyal {

// Truncated bivariate Taylor polynomial: c(a, b) multiplies hx^a hp^b, a <= NX, b <= NP.
template <class T, int NX, int NP>
struct Jet {
  using Scalar = T;
  using Coefficients = Eigen::Matrix<T, NX + 1, NP + 1>;
  static constexpr int order = NX + NP;

  Coefficients c = Coefficients::Zero();

  Jet() = default;
  Jet(T v) { c(0, 0) = v; }
  template <class S, std::enable_if_t<std::is_arithmetic_v<S>, int> = 0>
  explicit Jet(S v) {
    c(0, 0) = T(v);
  }

  static Jet variable(Axis axis, T at) {
    Jet j(at);
    if (axis == Axis::x) {
      if constexpr (NX > 0) j.c(1, 0) = T(1);
    } else {
      if constexpr (NP > 0) j.c(0, 1) = T(1);
    }
    return j;
  }

  T value() const { return c(0, 0); }

  // d^a/dx^a d^b/dp^b at the expansion point.
  T derivative(int a, int b) const {
    double f = 1;
    for (int k = 2; k <= a; ++k) f *= k;
    for (int k = 2; k <= b; ++k) f *= k;
    return c(a, b) * f;
  }

  Jet& operator+=(const Jet& o) {
    c += o.c;
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    c -= o.c;
    return *this;
  }
  Jet& operator*=(const Jet& o) {
    *this = *this * o;
    return *this;
  }
  Jet& operator*=(const T& s) {
    c *= s;
    return *this;
  }

  friend Jet operator-(const Jet& a) {
    Jet r;
    r.c = -a.c;
    return r;
  }
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i <= NX; ++i)
      for (int j = 0; j <= NP; ++j) {
        if (a.c(i, j) == T(0)) continue;
        for (int k = 0; k + i <= NX; ++k)
          for (int l = 0; l + j <= NP; ++l) r.c(i + k, j + l) += a.c(i, j) * b.c(k, l);
      }
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
  friend Jet operator/(Jet a, const T& s) {
    a.c /= s;
    return a;
  }
  friend Jet operator*(Jet a, const T& s) {
    a.c *= s;
    return a;
  }
  friend Jet operator*(const T& s, Jet a) {
    a.c *= s;
    return a;
  }
  friend Jet operator+(Jet a, const T& s) {
    a.c(0, 0) += s;
    return a;
  }
  friend Jet operator+(const T& s, Jet a) {
    a.c(0, 0) += s;
    return a;
  }
  friend Jet operator-(Jet a, const T& s) {
    a.c(0, 0) -= s;
    return a;
  }
  friend Jet operator-(const T& s, const Jet& a) { return -a + s; }
};

template <class T>
struct is_jet : std::false_type {};
template <class T, int NX, int NP>
struct is_jet<Jet<T, NX, NP>> : std::true_type {};

template <class T, int NX, int NP>
T value(const Jet<T, NX, NP>& j) {
  return j.value();
}
template <class S, std::enable_if_t<!is_jet<S>::value, int> = 0>
S value(const S& s) {
  return s;
}

// f(u) from the derivatives f^(n)(u0), n = 0..order.
template <class T, int NX, int NP>
Jet<T, NX, NP> compose(const Jet<T, NX, NP>& u, const std::array<T, NX + NP + 1>& d) {
  Jet<T, NX, NP> delta = u;
  delta.c(0, 0) = T(0);
  Jet<T, NX, NP> result(d[0]), power(T(1));
  double fact = 1;
  for (int n = 1; n <= NX + NP; ++n) {
    power = power * delta;
    fact *= n;
    result += power * (d[n] / fact);
  }
  return result;
}

template <class T, int NX, int NP>
Jet<T, NX, NP> exp(const Jet<T, NX, NP>& u) {
  std::array<T, NX + NP + 1> d;
  d.fill(std::exp(u.value()));
  return compose(u, d);
}

template <class T, int NX, int NP>
Jet<T, NX, NP> sin(const Jet<T, NX, NP>& u) {
  std::array<T, NX + NP + 1> d;
  const T s = std::sin(u.value()), co = std::cos(u.value());
  for (int n = 0; n <= NX + NP; ++n) d[n] = n % 4 == 0 ? s : n % 4 == 1 ? co : n % 4 == 2 ? -s : -co;
  return compose(u, d);
}

template <class T, int NX, int NP>
Jet<T, NX, NP> cos(const Jet<T, NX, NP>& u) {
  std::array<T, NX + NP + 1> d;
  const T s = std::sin(u.value()), co = std::cos(u.value());
  for (int n = 0; n <= NX + NP; ++n) d[n] = n % 4 == 0 ? co : n % 4 == 1 ? -s : n % 4 == 2 ? -co : s;
  return compose(u, d);
}

template <class T, int NX, int NP>
Jet<T, NX, NP> reciprocal(const Jet<T, NX, NP>& u) {
  std::array<T, NX + NP + 1> d;
  const T inv = T(1) / u.value();
  T p = inv;
  for (int n = 0; n <= NX + NP; ++n) {
    d[n] = p;
    p *= -T(n + 1) * inv;
  }
  return compose(u, d);
}

// w' = -2 v w + 2i/sqrt(pi), w^(n+1) = -2 (v w^(n) + n w^(n-1)).
template <int NX, int NP>
Jet<std::complex<double>, NX, NP> faddeeva(const Jet<std::complex<double>, NX, NP>& u) {
  using C = std::complex<double>;
  std::array<C, NX + NP + 1> d;
  const C v = u.value();
  d[0] = faddeeva(v);
  if constexpr (NX + NP >= 1) d[1] = -2.0 * v * d[0] + C(0, 2 / std::sqrt(std::numbers::pi));
  for (int n = 1; n + 1 <= NX + NP; ++n) d[n + 1] = -2.0 * (v * d[n] + double(n) * d[n - 1]);
  return compose(u, d);
}

// sin(2 u x) / u, with the series 2x - (4/3) u^2 x^3 + ... when |u| < 1e-6.
template <class S>
S sin_ratio(double u, const S& x) {
  using std::sin;
  if (std::abs(u) >= 1e-6) return sin(x * (2 * u)) * (1 / u);
  const S x2 = x * x;
  const double u2 = u * u;
  return x * 2.0 - x * x2 * (4.0 / 3.0 * u2) + x * x2 * x2 * (4.0 / 15.0 * u2 * u2);
}

}  // namespace moyal
