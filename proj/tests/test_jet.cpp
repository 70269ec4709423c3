#include <doctest.h>

#include <cmath>

#include "moyal/jet.hpp"
#include "moyal/quadrature.hpp"

using namespace moyal;
using C = std::complex<double>;

TEST_CASE("jet derivatives of a product of exponentials and trig functions") {
  using J = Jet<C, 4, 3>;
  const double x0 = 0.3, p0 = -0.7;
  const J x = J::variable(Axis::x, x0), p = J::variable(Axis::p, p0);
  const J f = exp(-(x * x)) * sin(x * p * 2.0) + cos(p) * x;
  // d/dx and d/dp by hand.
  const double s = std::sin(2 * x0 * p0), c = std::cos(2 * x0 * p0), e = std::exp(-x0 * x0);
  CHECK(std::abs(f.value() - (e * s + std::cos(p0) * x0)) < 1e-15);
  CHECK(std::abs(f.derivative(1, 0) - (-2 * x0 * e * s + e * 2 * p0 * c + std::cos(p0))) < 1e-14);
  CHECK(std::abs(f.derivative(0, 1) - (e * 2 * x0 * c - std::sin(p0) * x0)) < 1e-14);
  // Mixed derivatives against a second-order central difference of the analytic first derivative.
  auto fx = [](double xx, double pp) {
    const double ee = std::exp(-xx * xx);
    return -2 * xx * ee * std::sin(2 * xx * pp) + ee * 2 * pp * std::cos(2 * xx * pp) + std::cos(pp);
  };
  const double h = 1e-5;
  CHECK(std::abs(f.derivative(1, 1) - (fx(x0, p0 + h) - fx(x0, p0 - h)) / (2 * h)) < 1e-8);
}

TEST_CASE("reciprocal and exact polynomial derivatives") {
  using J = Jet<C, 4, 0>;
  const J x = J::variable(Axis::x, 2.0);
  const J r = reciprocal(x);
  CHECK(std::abs(r.derivative(3, 0) - (-6.0 / 16.0)) < 1e-15);
  const J q = x * x * x;
  CHECK(q.derivative(3, 0) == C(6));
  CHECK(q.derivative(4, 0) == C(0));
}

TEST_CASE("Faddeeva jet follows the derivative recurrence") {
  using J = Jet<C, 4, 0>;
  const C z0(0.4, 1.2);
  const J z = J::variable(Axis::x, z0);
  const J w = faddeeva(z);
  const double h = 1e-3;
  const C fd2 = (faddeeva(z0 + h) - 2.0 * faddeeva(z0) + faddeeva(z0 - h)) / (h * h);
  CHECK(std::abs(w.derivative(2, 0) - fd2) < 1e-5);
  const C fd1 = (faddeeva(z0 + h) - faddeeva(z0 - h)) / (2 * h);
  CHECK(std::abs(w.derivative(1, 0) - fd1) < 1e-6);
}

TEST_CASE("sinc rule is continuous") {
  for (double x : {-3.0, -0.5, 1.7}) {
    const C a = sin_ratio(1e-6 * (1 + 1e-12), C(x));
    const C b = sin_ratio(1e-6 * (1 - 1e-12), C(x));
    CHECK(std::abs(a - b) < 1e-10);
    CHECK(std::abs(sin_ratio(0.0, C(x)) - 2 * x) == 0);
  }
  using J = Jet<C, 4, 0>;
  const J x = J::variable(Axis::x, -1.2);
  const J a = sin_ratio(2e-6, x), b = sin_ratio(0.5e-6, x);
  for (int n = 0; n <= 4; ++n) CHECK(std::abs(a.derivative(n, 0) - b.derivative(n, 0)) < 1e-9);
}

TEST_CASE("Gauss-Legendre rules") {
  for (int n : {1, 2, 5, 16, 24, 40}) {
    const GaussLegendre g = gauss_legendre(n);
    CHECK(g.weights.sum() == doctest::Approx(2).epsilon(1e-14));
    // Exact for degree 2n-1.
    const int d = 2 * n - 2;
    double s = 0;
    for (int i = 0; i < n; ++i) s += g.weights[i] * std::pow(g.nodes[i], d);
    CHECK(s == doctest::Approx(2.0 / (d + 1)).epsilon(1e-13));
  }
  const double v = integrate([](double t) { return std::exp(t); }, 0, 3, 4, gauss_legendre(12));
  CHECK(v == doctest::Approx(std::exp(3.0) - 1).epsilon(1e-15));
}
