#include <doctest.h>

#include <cmath>
#include <numbers>

#include "moyal/wigner.hpp"

using namespace moyal;

namespace {

const cplx I(0, 1);
const double pi = std::numbers::pi;

// Trapezoid sum of the defining integral over [-l, l]; exact to roundoff for
// Gaussian-damped integrands.
cplx dense_oracle(const WaveFunction& a, const WaveFunction& b, double x, double p, double l = 14, int n = 28000) {
  const double h = 2 * l / n;
  cplx s = 0;
  for (int k = 0; k <= n; ++k) {
    const double y = -l + k * h;
    const double w = (k == 0 || k == n) ? 0.5 : 1.0;
    s += w * std::exp(-2.0 * I * p * y) * a(x + y) * std::conj(b(x - y));
  }
  return s * h / pi;
}

}  // namespace

TEST_CASE("whole-line Gaussian") {
  const WaveFunction g = WaveFunction::whole(Profile::gaussian());
  const PhaseGrid grid = make_grid(-3, 3, -3, 3, 13, 13);
  const TransformResult r = wigner_of(g, grid);
  CHECK(r.rho.real);
  CHECK(r.converged());
  double worst = 0;
  for (Index i = 0; i < grid.nx; ++i)
    for (Index j = 0; j < grid.np; ++j) {
      const double x = grid.x(i), p = grid.p(j);
      worst = std::max(worst, std::abs(r.rho(i, j) - std::sqrt(pi) * std::exp(-x * x - p * p)));
    }
  CHECK(worst < 1e-12);
}

TEST_CASE("Dirichlet-wall scattering state against its segment integral") {
  const double k = 1, delta = pi;
  const Profile left = Profile::plane_wave(k) + Profile::plane_wave(-k, std::exp(I * delta));
  const WaveFunction psi{left, Profile(), 0.0};
  const WignerTransform wt;
  for (double x : {-0.3, -1.0, -2.7})
    for (double p : {-1.9, -0.4, 0.35, 1.25, 2.2}) {
      const double a = -x;
      const double expected = std::sin(2 * (p - k) * a) / (p - k) + std::sin(2 * (p + k) * a) / (p + k) +
                              2 * std::cos(2 * k * x - delta) * std::sin(2 * p * a) / p;
      const PointValue v = wt.at(psi, psi, x, p);
      CHECK(std::abs(v.value - expected) < 1e-11);
      CHECK(v.spread == 0.0);
    }
  CHECK(std::abs(wt.at(psi, psi, 0.8, 0.3).value) == 0.0);
}

TEST_CASE("exponentially decaying cross terms") {
  const double kappa = 0.7;
  const WaveFunction psi{Profile::exponential(-kappa), Profile::exponential(kappa), 0.0};
  const WignerTransform wt;
  for (double x : {-1.3, -0.2, 0.4, 2.0})
    for (double p : {-1.1, 0.3, 2.4}) {
      const double a = std::abs(x);
      const cplx expected = std::exp(-2 * kappa * a) * std::sin(2 * p * a) / p +
                            std::exp(-(2 * kappa - 2.0 * I * p) * a) / (2 * kappa - 2.0 * I * p) +
                            std::exp(-(2 * kappa + 2.0 * I * p) * a) / (2 * kappa + 2.0 * I * p);
      const PointValue v = wt.at(psi, psi, x, p);
      CHECK(std::abs(v.value - expected) < 1e-12);
      CHECK(v.spread == 0.0);
    }
}

TEST_CASE("non-decaying tails use the damped extrapolation") {
  const double k = 1.2;
  const cplx t(0.6, 0.3);
  const WaveFunction psi{Profile::plane_wave(k), Profile::plane_wave(k, t), 0.0};
  const double x = -0.8, p = 0.3, d = 0.8;
  // Finite segment plus the two Abel-regularized tails.
  const cplx finite = std::sin(2 * (p - k) * d) / (p - k);
  const cplx left = std::conj(t) * std::exp(-2.0 * I * (k - p) * d) / (2.0 * I * (k - p));
  const cplx right = t * std::exp(2.0 * I * (k - p) * d) / (-2.0 * I * (k - p));
  const cplx expected = finite + left + right;

  TransformOptions coarse;
  const PointValue v = WignerTransform(coarse).at(psi, psi, x, p);
  CHECK(std::abs(v.value - expected) < 1e-5);
  CHECK(v.spread > 0);
  CHECK(std::abs(v.value - expected) < v.spread);

  TransformOptions fine;
  fine.epsilon = 1e-4;
  const PointValue w = WignerTransform(fine).at(psi, psi, x, p);
  CHECK(std::abs(w.value - expected) < 1e-11);
  CHECK(w.spread < v.spread);

  // p = k: the tail integrand does not oscillate and the limit does not exist.
  const PointValue pole = WignerTransform(coarse).at(psi, psi, x, k);
  CHECK(pole.spread > 1);
  const TransformResult grid_result =
      cross_wigner(psi, psi, make_grid(-1, -0.3, k - 0.7, k + 0.7, 8, 15), coarse);
  CHECK_FALSE(grid_result.converged());
}

TEST_CASE("oscillator pair") {
  const WaveFunction psi0 = WaveFunction::whole(Profile::gaussian());
  const WaveFunction psi1 = WaveFunction::whole(Profile::gaussian_moment(1));
  TransformOptions o;
  o.times_pi = false;
  const PhaseGrid g = make_grid(-2.5, 2.5, -2.5, 2.5, 11, 11);
  const TransformResult r = cross_wigner(psi0, psi1, g, o);
  const TransformResult swapped = cross_wigner(psi1, psi0, g, o);
  double analytic = 0, dense = 0, swap = 0;
  for (Index i = 0; i < g.nx; ++i)
    for (Index j = 0; j < g.np; ++j) {
      const double x = g.x(i), p = g.p(j);
      analytic =
          std::max(analytic, std::abs(r.rho(i, j) - (x + I * p) * std::exp(-x * x - p * p) / std::sqrt(pi)));
      if (i % 3 == 0 && j % 3 == 0) dense = std::max(dense, std::abs(r.rho(i, j) - dense_oracle(psi0, psi1, x, p)));
      swap = std::max(swap, std::abs(swapped.rho(i, j) - std::conj(r.rho(i, j))));
    }
  CHECK(analytic < 1e-12);
  CHECK(dense < 1e-8);
  CHECK(swap < 1e-14);

  const TransformResult same = off_diagonal_wigner({psi0, psi0, 1, 1}, g, {}, o);
  CHECK((same.rho.values - wigner_of(psi0, g, o).rho.values).cwiseAbs().maxCoeff() < 1e-15);

  const ComplexTime z{1.0, 0.5};
  const TransformResult rt = off_diagonal_wigner({psi0, psi1, 1, 3}, g, z, o);
  const double modulus = std::exp(-(1 + 3) * 0.5);
  CHECK(std::abs(std::abs(ansatz_phase(1, 3, z)) - modulus) < 1e-15);
  for (Index i = 0; i < g.nx; ++i)
    for (Index j = 0; j < g.np; ++j)
      if (std::abs(r.rho(i, j)) > 1e-200) CHECK(std::abs(std::abs(rt.rho(i, j)) / std::abs(r.rho(i, j)) - modulus) < 1e-13);
  CHECK_THROWS_AS(ansatz_phase(1, 3, {0, -10}), std::overflow_error);
}

TEST_CASE("transform properties") {
  const WaveFunction psi{Profile::cosine(1, 0), Profile::gaussian(), 0.0};
  const PhaseGrid g = make_grid(-2, 2, -2.5, 2.5, 9, 11);
  const TransformResult r = wigner_of(psi, g);
  CHECK(r.imag_ratio <= 1e-10);
  CHECK(r.rho.real);
  TransformOptions doubled;
  doubled.n_nodes = 40;
  const TransformResult r2 = wigner_of(psi, g, doubled);
  CHECK((r.rho.values - r2.rho.values).cwiseAbs().maxCoeff() < 1e-8);
  for (double x : {-1.0, 0.5})
    for (double p : {-0.7, 1.3}) {
      const cplx oracle = pi * dense_oracle(psi, psi, x, p, 40, 120000);
      CHECK(std::abs(WignerTransform().at(psi, psi, x, p).value - oracle) < 1e-8);
    }

  const WaveFunction growing{Profile::exponential(0.5), Profile(), 0.0};
  CHECK_THROWS_AS(wigner_of(growing, g), std::invalid_argument);
  const WaveFunction growing_right{Profile(), Profile::exponential(-0.5), 0.0};
  CHECK_THROWS_AS(wigner_of(growing_right, g), std::invalid_argument);
  CHECK(std::abs(psi.derivative(-0.4) - (-std::sin(-0.4))) < 1e-15);
  CHECK(std::abs(psi.derivative(0.4) - (-0.4 * std::exp(-0.08))) < 1e-15);
}
