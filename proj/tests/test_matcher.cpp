#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/SVD>

#include "moyal/matcher.hpp"
#include "moyal/verifier.hpp"

using namespace moyal;

namespace {

const cplx I(0, 1);
const double pi = std::numbers::pi;
const PhaseGrid left_grid = make_grid(-3, 0, -3, 3, 31, 61);

std::vector<double> momenta(const std::vector<double>& avoid, double band = 0.05) {
  std::vector<double> ps;
  for (int j = 0; j <= 60; ++j) {
    const double p = -2.95 + 0.0983 * j;
    bool ok = true;
    for (double q : avoid) ok = ok && std::abs(p - q) > band;
    if (ok) ps.push_back(p);
  }
  return ps;
}

// e^{-y^2} erfi(y) by its Maclaurin series; y <= 5 here.
double scaled_erfi(double y) {
  double term = y, sum = y;
  for (int n = 1; n < 200; ++n) {
    term *= y * y / n;
    sum += term / (2 * n + 1);
  }
  return 2 / std::sqrt(pi) * sum * std::exp(-y * y);
}

ClosedFormSymbol combination(const FundamentalBasis& b, std::function<cplx(int, double)> c) {
  ClosedFormSymbol s = b.elements[0];
  s.id = "combination";
  s.real = false;
  s.x_jet = [b, c](double x, double p) {
    ClosedFormSymbol::XJet r;
    for (int j = 0; j < 4; ++j) r += b.elements[j].x_jet(x, p) * c(j, p);
    return r;
  };
  return s;
}

}  // namespace

TEST_CASE("positive-energy bases solve the free quartic") {
  for (BasisKind kind : {BasisKind::product, BasisKind::shifted, BasisKind::exponential}) {
    const FundamentalBasis b = basis(1, kind);
    REQUIRE(b.elements.size() == 4);
    for (const ClosedFormSymbol& e : b.elements) {
      INFO(e.id);
      CHECK(quartic_free_residual(1, piece_of(e, left_grid)).normalized_sup() < 1e-12);
    }
  }
  CHECK_THROWS_AS(basis(0), std::invalid_argument);
  CHECK_THROWS_AS(basis(1, BasisKind::negative), std::invalid_argument);
}

TEST_CASE("negative-energy set") {
  const double L = 2;
  const FundamentalBasis b = basis(-1 / (L * L));
  CHECK(b.kind == BasisKind::negative);
  CHECK(b.wavenumber == doctest::Approx(0.5));
  CHECK(std::abs(b.elements[0].eval(0.3, 0.7) - std::exp(cplx(0.3, 0.42))) < 1e-15);
  CHECK(std::abs(b.elements[3].eval(0.3, 0.7) - std::exp(cplx(-0.3, -0.42))) < 1e-15);
  for (const ClosedFormSymbol& e : b.elements)
    CHECK(quartic_free_residual(b.energy, piece_of(e, left_grid)).normalized_sup() < 1e-12);
}

TEST_CASE("change of basis") {
  const FundamentalBasis prod = basis(1.7);
  for (BasisKind kind : {BasisKind::shifted, BasisKind::exponential}) {
    const FundamentalBasis b = basis(1.7, kind);
    const Eigen::Matrix4cd m = to_product_basis(kind);
    for (double x : {-1.3, 0.4})
      for (double p : {-0.8, 2.1})
        for (int j = 0; j < 4; ++j) {
          cplx s = 0;
          for (int i = 0; i < 4; ++i) s += m(j, i) * prod.elements[i].eval(x, p);
          CHECK(std::abs(s - b.elements[j].eval(x, p)) < 1e-14);
        }
    const Eigen::Matrix4cd g = m * m.adjoint();
    const double scale = g(0, 0).real();
    CHECK((g - scale * Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("collocation conditioning") {
  const FundamentalBasis b = basis(1);
  const double xs[4] = {-2.6, -1.7, -0.9, -0.35};
  auto cond_at = [&](double p) {
    Eigen::Matrix4cd A;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) A(i, j) = b.elements[j].eval(xs[i], p);
    const auto sv = Eigen::JacobiSVD<Eigen::Matrix4cd>(A).singularValues();
    return sv(0) / sv(3);
  };
  for (double p : momenta({-1, 0, 1}, 0.1)) CHECK(cond_at(p) < 1e8);
  CHECK(cond_at(1e-9) > 1e8);
  CHECK(cond_at(1 + 1e-9) > 1e8);
}

TEST_CASE("Robin coefficients from the four-term form") {
  const double k = 1, delta = pi;
  const ClosedFormSymbol s = robin_scatter(k, 0);
  const FundamentalBasis b = basis(1, BasisKind::exponential);
  const std::vector<double> ps = momenta({-k, 0, k});
  const CoefficientFit fit = fit_coefficients(s, b, -3, 0, ps);
  const cplx ed = std::exp(I * delta);
  double worst = 0;
  for (size_t m = 0; m < ps.size(); ++m) {
    const double p = ps[m];
    CHECK(!fit.ill_conditioned[m]);
    CHECK(!fit.near_pole[m]);
    // e^{2i(p+k)x}, e^{2i(p-k)x}, e^{-2i(p+k)x}, e^{-2i(p-k)x}.
    const cplx expect[4] = {1.0 / (2.0 * I * (p + k)) + std::conj(ed) / (2.0 * I * p),
                            1.0 / (2.0 * I * (p - k)) + ed / (2.0 * I * p),
                            -1.0 / (2.0 * I * (p + k)) - ed / (2.0 * I * p),
                            -1.0 / (2.0 * I * (p - k)) - std::conj(ed) / (2.0 * I * p)};
    double norm = 0;
    for (int j = 0; j < 4; ++j) norm = std::max(norm, std::abs(expect[j]));
    for (int j = 0; j < 4; ++j) worst = std::max(worst, std::abs(fit.c(m, j) - expect[j]) / norm);
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("matched free piece: coefficients are its bracketed factors") {
  const ClosedFormSymbol s = match_free_sho().first;
  const FundamentalBasis b = basis(1, BasisKind::shifted);
  const std::vector<double> ps = momenta({-1, 0, 1});
  const CoefficientFit fit = fit_coefficients(s, b, -3, 0, ps);
  const double c = 2 * std::sqrt(2 * pi);
  double worst = 0;
  for (size_t m = 0; m < ps.size(); ++m) {
    const double p = ps[m];
    const double ym = (2 * p - 1) / std::sqrt(2.0), yp = (2 * p + 1) / std::sqrt(2.0);
    // 2i sqrt(2 pi) erf(iy) e^{-y^2} = -2 sqrt(2 pi) erfi(y) e^{-y^2}.
    const double bm = 1 / (p - 1) + 1 / p - c * scaled_erfi(ym), bp = 1 / (p + 1) + 1 / p - c * scaled_erfi(yp);
    const double expect[4] = {c * std::exp(-yp * yp) / 4, c * std::exp(-ym * ym) / 4, -bp / 4, -bm / 4};
    double norm = 0;
    for (double e : expect) norm = std::max(norm, std::abs(e));
    for (int j = 0; j < 4; ++j) worst = std::max(worst, std::abs(fit.c(m, j) - expect[j]) / norm);
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("single element and idempotence") {
  const FundamentalBasis b = basis(2.3);
  const std::vector<double> ps = momenta({-std::sqrt(2.3), 0, std::sqrt(2.3)});
  for (int j = 0; j < 4; ++j) {
    const CoefficientFit fit = fit_coefficients(b.elements[j], b, -3, 0, ps);
    for (size_t m = 0; m < ps.size(); ++m)
      for (int i = 0; i < 4; ++i) CHECK(std::abs(fit.c(m, i) - (i == j ? 1.0 : 0.0)) < 1e-10);
  }
  const CoefficientFit first = fit_coefficients(robin_scatter(std::sqrt(2.3), 0.4), b, -3, 0, ps);
  std::map<double, Index> row;
  for (size_t m = 0; m < ps.size(); ++m) row[ps[m]] = Index(m);
  ClosedFormSymbol rebuilt = b.elements[0];
  rebuilt.x_jet = [&](double x, double p) {
    ClosedFormSymbol::XJet r;
    for (int j = 0; j < 4; ++j) r += b.elements[j].x_jet(x, p) * first.c(row.at(p), j);
    return r;
  };
  const CoefficientFit second = fit_coefficients(rebuilt, b, -3, 0, ps);
  CHECK((first.c - second.c).cwiseAbs().maxCoeff() < 1e-12 * first.c.cwiseAbs().maxCoeff());
}

TEST_CASE("basis closure") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1, 1);
  for (double e : {1.0, 0.3, -0.5}) {
    const FundamentalBasis b = basis(e);
    for (int n = 0; n < 3; ++n) {
      double a[4][3];
      for (auto& r : a)
        for (double& v : r) v = u(rng);
      const ClosedFormSymbol s = combination(b, [a](int j, double p) {
        return cplx(a[j][0] * std::cos(a[j][1] * p), a[j][2] * std::sin(p));
      });
      CHECK(sse_residual(LocalHamiltonian{PolySymbol::monomial(0, 2)}, e, piece_of(s, left_grid)).normalized_sup() <
            1e-10);
    }
  }
}

TEST_CASE("recovery of free-region catalog entries") {
  std::mt19937_64 rng(13);
  std::vector<ClosedFormSymbol> entries = {robin_scatter(0.5, 1), robin_scatter(2, neumann),
                                           point_scatter(random_point_params(rng), 1.2).first,
                                           jump_below(1, 2).first, jump_above(2, 1).first, match_free_sho().first};
  for (const ClosedFormSymbol& s : entries) {
    INFO(s.id);
    const FundamentalBasis b = basis(s.energy);
    std::vector<double> avoid = s.poles();
    for (double q : b.degenerate_momenta()) avoid.push_back(q);
    const std::vector<double> ps = momenta(avoid);
    const CoefficientFit fit = fit_coefficients(s, b, -3, 0, ps);
    double worst = 0, scale = 0;
    for (size_t m = 0; m < ps.size(); ++m)
      for (double x : {-2.9, -2.2, -1.45, -0.7, -0.1}) {
        worst = std::max(worst, std::abs(reconstruct(fit, b, Index(m), x) - s.eval(x, ps[m])));
        scale = std::max(scale, std::abs(s.eval(x, ps[m])));
      }
    CHECK(worst < 1e-8 * scale);
  }
}

TEST_CASE("fits from samples and CSV output") {
  const ClosedFormSymbol s = robin_scatter(1, 0);
  const FundamentalBasis b = basis(1);
  const PhaseGrid g = make_grid(-3, 0, -2.5, 2.5, 16, 11);
  const CoefficientFit fs = fit_coefficients(s.sample(g), b, Region::negative);
  const Eigen::VectorXd gp = g.ps();
  const CoefficientFit fc = fit_coefficients(s, b, -3, 0, std::vector<double>(gp.data(), gp.data() + gp.size()));
  for (Index m = 0; m < g.np; ++m) {
    if (fs.near_pole[m]) continue;
    for (int j = 0; j < 4; ++j) CHECK(std::abs(fs.c(m, j) - fc.c(m, j)) < 1e-8 * (1 + std::abs(fc.c(m, j))));
  }
  CHECK(fs.near_pole[5]);  // p = 0
  CHECK_THROWS_AS(fit_coefficients(s.sample(make_grid(-1, 2, -1, 1, 8, 8)), b, Region::negative), std::invalid_argument);

  std::ostringstream csv;
  fc.write_csv(csv);
  std::istringstream in(csv.str());
  std::string header, line;
  std::getline(in, header);
  CHECK(header == "p,re_c1,im_c1,re_c2,im_c2,re_c3,im_c3,re_c4,im_c4,fit_residual,cond");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == g.np);
}

TEST_CASE("interface conditions") {
  const std::vector<double> ps = momenta({});
  // Dirichlet walls also have d_x rho(0, p) = 4 + 4 cos(delta) = 0, so the counterexample uses L = 1.
  const InterfaceReport wall_report = assemble_and_match(side_of(robin_scatter(1, 1)), zero_side(), 0,
                                                         InterfaceCondition::wall | InterfaceCondition::c1, ps);
  CHECK(wall_report.max_wall <= 1e-10);
  CHECK(wall_report.max_c1 > 0.1);
  CHECK(assemble_and_match(side_of(robin_scatter(1, 0)), zero_side(), 0, InterfaceCondition::wall, ps).max_wall <= 1e-10);

  const EntryPair m = match_free_sho();
  const InterfaceReport smooth =
      assemble_and_match(side_of(m.first), side_of(m.second), 0, InterfaceCondition::c0 | InterfaceCondition::c1, ps);
  CHECK(smooth.max_c0 <= 1e-6);
  CHECK(smooth.max_c1 <= 1e-6);
  const nlohmann::json j = smooth.to_json();
  CHECK(j.contains("c0"));
  CHECK(!j.contains("wall"));
  CHECK(j["c1"]["per_p"].size() == ps.size());
}
