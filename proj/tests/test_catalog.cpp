#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "moyal/catalog.hpp"
#include "moyal/quadrature.hpp"

using namespace moyal;

namespace {

const cplx I(0, 1);

// The series value at a removable momentum against the mean of its neighbours.
template <class S>
double continuity_gap(const S& s, double x, double q, double d = 1e-7) {
  return std::abs(s.eval(x, q) - 0.5 * (s.eval(x, q + d) + s.eval(x, q - d)));
}
const double pi = std::numbers::pi;

bool near_pole(const ClosedFormSymbol& s, double p, double band) {
  for (double q : s.poles())
    if (std::abs(p - q) < band) return true;
  return false;
}

// Least-squares scalar c with entry ~ c * transform, and the sup residual
// relative to the sup of the entry.
struct Fit {
  cplx c;
  double rel;
};

Fit fit_to_transform(const ClosedFormSymbol& s, const std::vector<double>& xs, const std::vector<double>& ps,
                     const TransformOptions& opts = {}) {
  const WignerTransform wt(opts);
  std::vector<cplx> a, b;
  for (double x : xs)
    for (double p : ps) {
      if (near_pole(s, p, 0.05)) continue;
      a.push_back(s.eval(x, p));
      b.push_back(wt.at(*s.wave, *s.wave, x, p).value);
    }
  cplx num = 0;
  double den = 0, sup = 0;
  for (size_t n = 0; n < a.size(); ++n) {
    num += std::conj(b[n]) * a[n];
    den += std::norm(b[n]);
    sup = std::max(sup, std::abs(a[n]));
  }
  const cplx c = num / den;
  double worst = 0;
  for (size_t n = 0; n < a.size(); ++n) worst = std::max(worst, std::abs(a[n] - c * b[n]));
  return {c, worst / sup};
}

std::vector<double> span(double lo, double hi, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(lo + (hi - lo) * i / (n - 1));
  return v;
}

// Sixth-order central difference of the n-th x-derivative of eval.
cplx fd_x(const ClosedFormSymbol& s, int n, double x, double p, double h) {
  if (n == 0) return s.eval(x, p);
  auto d1 = [&](double y) { return fd_x(s, n - 1, y, p, h); };
  return (d1(x + 3 * h) - 9.0 * d1(x + 2 * h) + 45.0 * d1(x + h) - 45.0 * d1(x - h) + 9.0 * d1(x - 2 * h) -
          d1(x - 3 * h)) /
         (60 * h);
}

cplx central2(const ClosedFormSymbol& s, int n, double x, double p, double h) {
  if (n == 0) return s.eval(x, p);
  return (central2(s, n - 1, x + h, p, h) - central2(s, n - 1, x - h, p, h)) / (2 * h);
}

std::vector<ClosedFormSymbol> sample_entries() {
  std::mt19937_64 rng(11);
  std::vector<ClosedFormSymbol> v = {robin_scatter(1.3, 0.7), robin_bound(1.5)};
  auto add = [&](EntryPair e) {
    v.push_back(e.first);
    v.push_back(e.second);
  };
  add(point_bound(random_bound_params(rng)));
  add(point_scatter(random_point_params(rng), 1.1));
  add(jump_below(1, 2));
  add(jump_above(2, 1));
  add(match_free_sho());
  return v;
}

}  // namespace

TEST_CASE("Robin phase branch") {
  CHECK(robin_phase(1, 0) == doctest::Approx(pi).epsilon(1e-15));
  CHECK(robin_phase(1, neumann) == 0.0);
  CHECK(robin_phase(2, -0.3) > pi);
  CHECK(robin_phase(2, -0.3) < 2 * pi);
  CHECK(1 / std::tan(robin_phase(0.8, 1.7) / 2) == doctest::Approx(0.8 * 1.7).epsilon(1e-13));
  CHECK_THROWS_AS(robin_scatter(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(robin_bound(-1), std::invalid_argument);
}

TEST_CASE("Robin scattering entry") {
  const ClosedFormSymbol s = robin_scatter(1, 0);
  CHECK(s.region == Region::negative);
  CHECK(s.energy == 1.0);
  const double expected = 2 * (-1) + std::sin(-4.0) / 2 - 2 * std::cos(-2.0) * std::sin(-2.0);
  CHECK(std::abs(s.eval(-1, 1) - expected) < 1e-14);
  CHECK(s.eval(0.5, 0.3) == cplx(0));

  const ClosedFormSymbol four = robin_scatter_four_term(1.7, -0.4);
  const ClosedFormSymbol three = robin_scatter(1.7, -0.4);
  double worst = 0;
  for (double x : span(-3, 0, 13))
    for (double p : span(-3.05, 3.1, 29)) {
      worst = std::max(worst, std::abs(three.eval(x, p) - four.eval(x, p)));
      CHECK(std::abs(three.eval(x, -p) - three.eval(x, p)) < 1e-13);
    }
  CHECK(worst < 1e-10);
  for (double p : {-2.0, 0.5, 1.0})
    CHECK(std::abs(three.eval(0, p)) < 1e-15);
}

TEST_CASE("Robin bound entry") {
  const double L = 1.5;
  const ClosedFormSymbol s = robin_bound(L);
  CHECK(s.energy == doctest::Approx(-1 / (L * L)));
  for (double x : {-0.2, -1.0, -3.0}) {
    CHECK(std::abs(s.eval(x, 0) - (-4 * x / L) * std::exp(2 * x / L)) < 1e-14);
    CHECK(std::abs(s.eval(x, 1e-8) - s.eval(x, 0)) < 1e-10);
  }
  CHECK(s.eval(0.4, 0.2) == cplx(0));
  CHECK_THROWS_AS(robin_bound(0), std::invalid_argument);

  // Momentum marginal against (2/L) e^{2x/L}; the window ends on a zero of cos(2 P |x|).
  std::vector<double> ratios;
  const GaussLegendre gl = gauss_legendre(20);
  for (double x : {-0.3, -0.9, -1.7, -2.6}) {
    const double P = (4000 + 0.5) * pi / (2 * std::abs(x));
    const int panels = 16000;
    double integral = 0;
    for (int n = 0; n < panels; ++n) {
      const double a = -P + 2 * P * n / panels, b = a + 2 * P / panels;
      for (Index q = 0; q < gl.nodes.size(); ++q) {
        const double p = 0.5 * (a + b) + 0.5 * (b - a) * gl.nodes[q];
        integral += 0.5 * (b - a) * gl.weights[q] * s.eval(x, p).real();
      }
    }
    ratios.push_back(integral / pi / ((2 / L) * std::exp(2 * x / L)));
  }
  for (double r : ratios) CHECK(std::abs(r - ratios[0]) < 1e-6);
  CHECK(std::abs(ratios[0] - 1) < 1e-6);
}

TEST_CASE("point interaction parameters") {
  CHECK_THROWS_AS(PointInteractionParams(1, 1, 1, 1), std::invalid_argument);
  CHECK_NOTHROW(PointInteractionParams(-1, 0, -1, 0));
  std::mt19937_64 rng(3);
  for (int n = 0; n < 20; ++n) {
    const PointInteractionParams q = random_point_params(rng);
    const double k = 0.4 + 0.1 * n;
    const Scattering a = point_amplitudes(q, k);
    CHECK(std::abs(std::norm(a.R) + std::norm(a.T) - 1) < 1e-12);
    // Matching conditions with psi_- = e^{ikx} + R e^{-ikx}, psi_+ = T e^{ikx}.
    const cplx m0 = 1.0 + a.R, m1 = I * k * (1.0 - a.R), p0 = a.T, p1 = I * k * a.T;
    CHECK(std::abs(-p1 - q.alpha * m1 - q.beta * m0) < 1e-12);
    CHECK(std::abs(-q.delta * m1 - q.gamma * m0 - p0) < 1e-12);
  }
  // Attractive delta well, g < 0.
  const double g = -0.8;
  const PointInteractionParams delta_well(-1, -g, -1, 0);
  CHECK(point_bound_kappa(delta_well) == doctest::Approx(-g / 2).epsilon(1e-14));
  const Scattering t = point_amplitudes(delta_well, 1.3);
  CHECK(std::abs(t.T - 2.0 * I * 1.3 / (2.0 * I * 1.3 - g)) < 1e-14);
  CHECK_THROWS_AS(point_bound_kappa(PointInteractionParams(-1, -0.8, -1, 0)), std::domain_error);

  const Scattering free = point_amplitudes(PointInteractionParams(-1, 0, -1, 0), 1.2);
  CHECK(std::abs(free.T - 1.0) < 1e-15);
  CHECK(std::abs(free.R) < 1e-15);
  const EntryPair e = point_scatter(PointInteractionParams(-1, 0, -1, 0), 1.2);
  for (double x : {-0.5, -2.0})
    for (double p : {-1.0, 0.4, 2.0}) CHECK(std::abs(e.first.eval(x, p)) < 1e-15);
}

TEST_CASE("point bound state") {
  std::mt19937_64 rng(5);
  for (int n = 0; n < 5; ++n) {
    const PointInteractionParams q = random_bound_params(rng);
    const double kappa = point_bound_kappa(q);
    CHECK(std::abs(q.beta + q.delta * kappa * kappa + kappa * (q.alpha + q.gamma)) < 1e-12);
    CHECK(std::abs((q.alpha + q.beta / kappa) - (-q.gamma - q.delta * kappa)) < 1e-12);
    const EntryPair e = point_bound(q);
    CHECK(e.first.energy == doctest::Approx(-kappa * kappa));
    for (double p : {-1.0, 0.0, 0.7}) {
      CHECK(std::isfinite(std::abs(e.first.eval(-1e-12, p))));
      CHECK(std::isfinite(std::abs(e.second.eval(1e-12, p))));
    }
    for (const ClosedFormSymbol* s : {&e.first, &e.second}) {
      const Fit f = fit_to_transform(*s, s == &e.first ? span(-2.5, -0.1, 6) : span(0.1, 2.5, 6), span(-2.1, 2.3, 9));
      CHECK(std::abs(f.c - 1.0) < 1e-10);
      CHECK(f.rel < 1e-10);
    }
  }
}

TEST_CASE("point scattering against the damped transform") {
  std::mt19937_64 rng(8);
  TransformOptions opts;
  opts.epsilon = 1e-4;
  for (int n = 0; n < 3; ++n) {
    const EntryPair e = point_scatter(random_point_params(rng), 0.9 + 0.3 * n);
    const Fit l = fit_to_transform(e.first, span(-2.5, -0.1, 5), span(-2.1, 2.3, 9), opts);
    const Fit r = fit_to_transform(e.second, span(0.1, 2.5, 5), span(-2.1, 2.3, 9), opts);
    CHECK(std::abs(l.c - 1.0) < 1e-7);
    CHECK(l.rel < 1e-7);
    CHECK(std::abs(r.c - 1.0) < 1e-7);
    CHECK(r.rel < 1e-7);
  }
}

TEST_CASE("jump below the step") {
  const EntryPair e = jump_below(1, 2);
  const double kappa = 1;
  CHECK(std::abs(std::abs((I * 1.0 + kappa) / (I * 1.0 - kappa)) - 1) < 1e-15);
  for (double p : span(-3, 3, 31)) CHECK(std::abs(e.first.eval(0, p) - e.second.eval(0, p)) < 1e-10);
  // Explicit decaying envelope on the right.
  for (double x : {0.5, 1.0, 2.0})
    for (double p : {-0.7, 0.3, 1.1}) {
      const double A = (2 * p + 1) * (2 * p + 1) + 1, B = (2 * p - 1) * (2 * p - 1) + 1;
      const double bracket = 4.0 / (A * B) * std::cos(2 * p * x) + (2 - 4 * p * p) / (p * A * B) * std::sin(2 * p * x);
      CHECK(std::abs(e.second.eval(x, p) * std::exp(2 * kappa * x) - bracket) < 1e-12);
    }
  // Continuity across p = 0 and p = +-k, where the left expression is evaluated by series.
  for (double q : {0.0, 1.0, -1.0})
    for (double x : {-0.3, -1.5}) {
      CHECK(continuity_gap(e.first, x, q) < 1e-10);
      CHECK(std::isfinite(std::abs(e.first.eval(x, q))));
    }
  // Lagrange interpolation at p = 0 joins the direct formula.
  for (double x : {-0.3, -1.5}) CHECK(continuity_gap(e.first, x, 1e-3) < 1e-10);

  // Same constant on both sides.
  const Fit l = fit_to_transform(e.first, span(-2.5, -0.1, 6), span(-2.1, 2.3, 9));
  const Fit r = fit_to_transform(e.second, span(0.1, 2.5, 6), span(-2.1, 2.3, 9));
  CHECK(l.rel < 1e-10);
  CHECK(r.rel < 1e-10);
  CHECK(std::abs(l.c - r.c) < 1e-10 * std::abs(l.c));
  CHECK_THROWS_AS(jump_below(2, 1), std::invalid_argument);
}

TEST_CASE("jump above the step") {
  const double k = 2, V0 = 1, l = std::sqrt(3.0);
  const double R = (k - l) / (k + l), T = 2 * k / (k + l);
  // psi, psi' continuity at 0.
  CHECK(std::abs((1 + R) - T) < 1e-12);
  CHECK(std::abs(k * (1 - R) - l * T) < 1e-12);
  const EntryPair e = jump_above(k, V0);
  TransformOptions opts;
  opts.epsilon = 1e-4;
  const Fit fl = fit_to_transform(e.first, span(-2.5, -0.1, 5), span(-2.9, 2.7, 11), opts);
  const Fit fr = fit_to_transform(e.second, span(0.1, 2.5, 5), span(-2.9, 2.7, 11), opts);
  CHECK(std::abs(fl.c - 1.0) < 1e-7);
  CHECK(fl.rel < 1e-7);
  CHECK(std::abs(fr.c - 1.0) < 1e-7);
  CHECK(fr.rel < 1e-7);

  for (double q : {0.0, k, -k})
    for (double x : {-0.4, -1.3}) CHECK(continuity_gap(e.first, x, q) < 1e-8);
  for (double x : {0.4, 1.3}) CHECK(continuity_gap(e.second, x, l) < 1e-8);
  // (k + l)/2 carries a nonzero residue on the left.
  const double up = (k + l) / 2;
  CHECK(std::abs(e.first.eval(-0.8, up + 1e-6)) > 1e4);
  CHECK_THROWS_AS(jump_above(1, 2), std::invalid_argument);
}

TEST_CASE("step forms reduce to the point forms at l = k") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> n01;
  for (int n = 0; n < 10; ++n) {
    const double k = 0.5 + 0.2 * n;
    const cplx R(n01(rng), n01(rng)), T(n01(rng), n01(rng));
    const EntryPair step = jump_above_forms(k, k, R, T);
    const EntryPair point = point_scatter_forms(k, R, T);
    for (double x : {-1.7, -0.3})
      for (double p : {-2.3, -0.35, 0.6, 1.9}) {
        const double scale = 1 + std::abs(point.first.eval(x, p));
        CHECK(std::abs(step.first.eval(x, p) - point.first.eval(x, p)) < 1e-12 * scale);
        const double xr = -x;
        CHECK(std::abs(step.second.eval(xr, p) - point.second.eval(xr, p)) < 1e-12 * (1 + std::abs(point.second.eval(xr, p))));
      }
  }
}

TEST_CASE("matched free and oscillator entries") {
  const EntryPair e = match_free_sho();
  CHECK(e.first.energy == 1.0);
  CHECK(e.second.hamiltonian(0.5, 0.5) == cplx(0.5));
  const WaveFunction& w = *e.first.wave;
  CHECK(std::abs(w.left(0) - 1.0) < 1e-15);
  CHECK(std::abs(w.right(0) - 1.0) < 1e-15);
  CHECK(std::abs(w.left.derivative(0)) < 1e-15);
  CHECK(std::abs(w.right.derivative(0)) < 1e-15);
  for (double x : span(-3, -0.05, 9))
    for (double p : span(-2.5, 2.5, 21)) {
      const cplx v = e.first.eval(x, p);
      CHECK(std::abs(v.imag()) <= 1e-9 * std::max(1.0, std::abs(v)));
    }
  const Fit l = fit_to_transform(e.first, span(-3, -0.05, 8), span(-2.5, 2.5, 15));
  const Fit r = fit_to_transform(e.second, span(0.05, 3, 8), span(-2.5, 2.5, 15));
  CHECK(std::abs(l.c - 1.0) < 1e-6);
  CHECK(l.rel < 1e-6);
  CHECK(std::abs(r.c - 1.0) < 1e-6);
  CHECK(r.rel < 1e-6);
  // Mixed jets agree with x-jets.
  for (double x : {0.2, 1.1})
    for (double p : {-0.9, 0.4}) {
      const auto mj = e.second.mixed_jet(x, p);
      for (int a = 0; a <= 4; ++a) CHECK(std::abs(mj.derivative(a, 0) - e.second.d_x(a, x, p)) < 1e-12);
      const double h = 1e-3;
      const cplx fd = (e.second.eval(x, p + h) - e.second.eval(x, p - h)) / (2 * h);
      CHECK(std::abs(mj.derivative(0, 1) - fd) < 1e-5);
    }
}

TEST_CASE("analytic x-derivatives against finite differences") {
  for (const ClosedFormSymbol& s : sample_entries()) {
    INFO(s.id << " " << to_string(s.region));
    const double x = s.region == Region::negative ? -0.83 : 0.91;
    for (double p : {-1.37, 0.61, 1.93}) {
      if (near_pole(s, p, 0.05)) continue;
      for (int n = 1; n <= 4; ++n) {
        const cplx exact = s.d_x(n, x, p);
        CHECK(std::abs(exact - fd_x(s, n, x, p, 0.02)) < 1e-6 * (1 + std::abs(exact)));
        const double e1 = std::abs(exact - central2(s, n, x, p, 0.02));
        const double e2 = std::abs(exact - central2(s, n, x, p, 0.01));
        if (e1 > 1e-9) CHECK(std::log2(e1 / e2) >= 1.8);
      }
      CHECK(s.d_x(0, x, p) == s.eval(x, p));
    }
  }
}

TEST_CASE("declared reality and tabulation") {
  for (const ClosedFormSymbol& s : sample_entries()) {
    INFO(s.id << " " << to_string(s.region));
    const double sgn = s.region == Region::negative ? -1 : 1;
    for (double x : {0.2, 1.4})
      for (double p : {-2.2, -0.3, 0.8}) {
        if (near_pole(s, p, 1e-3)) continue;
        const cplx v = s.eval(sgn * x, p);
        CHECK(std::abs(v.imag()) <= 1e-12 * std::abs(v) + 1e-300);
      }
    const PhaseGrid g = s.region == Region::negative ? make_grid(-2, 0, -2, 2, 9, 17) : make_grid(0, 2, -2, 2, 9, 17);
    const TabulatedSource t = s.tabulate(g);
    CHECK(t.real());
    const SampledSymbol d2 = t.derivative(2, 0);
    for (Index i = 0; i < g.nx; i += 4)
      for (Index j = 1; j < g.np; j += 5) {
        if (d2.margin(i, j)) continue;
        CHECK(std::abs(d2(i, j) - s.d_x(2, g.x(i), g.p(j)).real()) < 1e-12 * (1 + std::abs(d2(i, j))));
      }
  }
  // A genuine pole lands on the grid and is flagged.
  const EntryPair e = point_scatter(PointInteractionParams(-1, 0.5, -1, 0), 1);
  const PhaseGrid g = make_grid(-2, 0, -2, 2, 9, 17);
  const SampledSymbol v = e.first.sample(g);
  CHECK(v.margin.col(8).all());
  CHECK(e.first.exclusion(g).col(8).all());
  CHECK(!e.first.exclusion(g).col(3).any());
}

TEST_CASE("registry") {
  const nlohmann::json list = catalog_listing();
  CHECK(list.size() == 7);
  const auto built = catalog_lookup("robin_scatter").build({{"k", 1.0}, {"L", "inf"}});
  REQUIRE(built.size() == 1);
  CHECK(built[0].params["L"] == "inf");
  CHECK(catalog_lookup("jump_above").build({{"k", 2.0}, {"V0", 1.0}}).size() == 2);
  CHECK_THROWS_AS(catalog_lookup("nope"), std::invalid_argument);
  CHECK_THROWS_AS(catalog_lookup("robin_bound").build({{"L", 1.0}, {"extra", 2}}), std::invalid_argument);
  CHECK_THROWS_AS(catalog_lookup("point_bound").build({{"alpha", 1.0}, {"beta", 1.0}, {"gamma", 1.0}, {"delta", 1.0}}),
                  std::invalid_argument);
}
