#include "moyal/matcher.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include <Eigen/SVD>

namespace moyal {

namespace {

using XJet = ClosedFormSymbol::XJet;
constexpr cplx I{0, 1};

ClosedFormSymbol element(std::string name, double energy, std::function<XJet(const XJet&, double)> f, bool real) {
  ClosedFormSymbol s;
  s.id = std::move(name);
  s.region = Region::all;
  s.energy = energy;
  s.hamiltonian = PolySymbol::monomial(0, 2);
  s.real = real;
  s.x_jet = [f = std::move(f)](double x, double p) { return f(XJet::variable(Axis::x, x), p); };
  return s;
}

std::vector<double> chebyshev(double lo, double hi, int n) {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i)
    x[i] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * std::cos((2 * i + 1) * std::numbers::pi / (2 * n));
  return x;
}

bool near_any(double p, const std::vector<double>& qs, double band) {
  for (double q : qs)
    if (std::abs(p - q) < band) return true;
  return false;
}

void solve_one(CoefficientFit& fit, const FundamentalBasis& b, double p, const std::vector<double>& xs,
               const Eigen::VectorXcd& y) {
  Eigen::MatrixXcd A(xs.size(), 4);
  for (size_t i = 0; i < xs.size(); ++i)
    for (int j = 0; j < 4; ++j) A(i, j) = b.elements[j].eval(xs[i], p);
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cond = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
  const Eigen::VectorXcd c = svd.solve(y);
  const double scale = std::max(y.cwiseAbs().maxCoeff(), 1e-300);
  const Index m = static_cast<Index>(fit.p.size());
  fit.p.push_back(p);
  fit.c.conservativeResize(m + 1, 4);
  fit.c.row(m) = c.transpose();
  fit.residual.push_back((A * c - y).cwiseAbs().maxCoeff() / scale);
  fit.cond.push_back(cond);
  fit.ill_conditioned.push_back(!(cond <= 1e10));
}

}  // namespace

std::string to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::product: return "product";
    case BasisKind::shifted: return "shifted";
    case BasisKind::exponential: return "exponential";
    default: return "negative";
  }
}

std::vector<double> FundamentalBasis::degenerate_momenta() const {
  if (kind == BasisKind::negative) return {};
  return {-wavenumber, 0, wavenumber};
}

FundamentalBasis basis(double energy, BasisKind kind) {
  if (energy == 0) throw std::invalid_argument("E = 0 has a degenerate double root; no fundamental basis");
  FundamentalBasis b;
  b.energy = energy;
  if (energy < 0) {
    if (kind != BasisKind::negative && kind != BasisKind::product)
      throw std::invalid_argument("E < 0 only has the exponential set");
    const double kappa = std::sqrt(-energy);
    b.kind = BasisKind::negative;
    b.wavenumber = kappa;
    const char* names[4] = {"e^{2ipx}e^{2kx}", "e^{2ipx}e^{-2kx}", "e^{-2ipx}e^{2kx}", "e^{-2ipx}e^{-2kx}"};
    const int sp[4] = {1, 1, -1, -1}, sk[4] = {1, -1, 1, -1};
    for (int j = 0; j < 4; ++j)
      b.elements.push_back(element(names[j], energy,
                                   [kappa, s = sp[j], t = sk[j]](const XJet& x, double p) {
                                     return exp(x * cplx(2 * t * kappa, 2 * s * p));
                                   },
                                   false));
    return b;
  }
  if (kind == BasisKind::negative) throw std::invalid_argument("the exponential set needs E < 0");
  const double k = std::sqrt(energy);
  b.kind = kind;
  b.wavenumber = k;
  switch (kind) {
    case BasisKind::product:
      b.elements = {
          element("cos2kx cos2px", energy, [k](const XJet& x, double p) { return cos(x * cplx(2 * k)) * cos(x * cplx(2 * p)); }, true),
          element("cos2kx sin2px", energy, [k](const XJet& x, double p) { return cos(x * cplx(2 * k)) * sin(x * cplx(2 * p)); }, true),
          element("sin2kx cos2px", energy, [k](const XJet& x, double p) { return sin(x * cplx(2 * k)) * cos(x * cplx(2 * p)); }, true),
          element("sin2kx sin2px", energy, [k](const XJet& x, double p) { return sin(x * cplx(2 * k)) * sin(x * cplx(2 * p)); }, true)};
      break;
    case BasisKind::shifted:
      b.elements = {
          element("cos2(p+k)x", energy, [k](const XJet& x, double p) { return cos(x * cplx(2 * (p + k))); }, true),
          element("cos2(p-k)x", energy, [k](const XJet& x, double p) { return cos(x * cplx(2 * (p - k))); }, true),
          element("sin2(p+k)x", energy, [k](const XJet& x, double p) { return sin(x * cplx(2 * (p + k))); }, true),
          element("sin2(p-k)x", energy, [k](const XJet& x, double p) { return sin(x * cplx(2 * (p - k))); }, true)};
      break;
    default:
      b.elements = {
          element("e^{2i(p+k)x}", energy, [k](const XJet& x, double p) { return exp(x * cplx(0, 2 * (p + k))); }, false),
          element("e^{2i(p-k)x}", energy, [k](const XJet& x, double p) { return exp(x * cplx(0, 2 * (p - k))); }, false),
          element("e^{-2i(p+k)x}", energy, [k](const XJet& x, double p) { return exp(x * cplx(0, -2 * (p + k))); }, false),
          element("e^{-2i(p-k)x}", energy, [k](const XJet& x, double p) { return exp(x * cplx(0, -2 * (p - k))); }, false)};
  }
  return b;
}

Eigen::Matrix4cd to_product_basis(BasisKind kind) {
  // Product order: (cc, cs, sc, ss) = (cos2kx cos2px, cos2kx sin2px, sin2kx cos2px, sin2kx sin2px).
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  switch (kind) {
    case BasisKind::product:
      m.setIdentity();
      break;
    case BasisKind::shifted:
      m.row(0) << 1, 0, 0, -1;   // cos2(p+k)x = cc - ss
      m.row(1) << 1, 0, 0, 1;    // cos2(p-k)x = cc + ss
      m.row(2) << 0, 1, 1, 0;    // sin2(p+k)x = cs + sc
      m.row(3) << 0, 1, -1, 0;   // sin2(p-k)x = cs - sc
      break;
    case BasisKind::exponential: {
      const Eigen::Matrix4cd s = to_product_basis(BasisKind::shifted);
      m.row(0) = s.row(0) + I * s.row(2);
      m.row(1) = s.row(1) + I * s.row(3);
      m.row(2) = s.row(0) - I * s.row(2);
      m.row(3) = s.row(1) - I * s.row(3);
      break;
    }
    default:
      throw std::invalid_argument("the exponential set is not spanned by the product basis");
  }
  return m;
}

CoefficientFit fit_coefficients(const ClosedFormSymbol& data, const FundamentalBasis& b, double x_lo, double x_hi,
                                const std::vector<double>& ps, double band) {
  if (!(x_hi > x_lo)) throw std::invalid_argument("empty collocation interval");
  CoefficientFit fit;
  fit.kind = b.kind;
  fit.energy = b.energy;
  const std::vector<double> xs = chebyshev(x_lo, x_hi, 3 * 4);
  std::vector<double> poles = data.poles();
  for (double q : b.degenerate_momenta()) poles.push_back(q);
  for (double p : ps) {
    Eigen::VectorXcd y(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) y(i) = data.eval(xs[i], p);
    solve_one(fit, b, p, xs, y);
    fit.near_pole.push_back(near_any(p, poles, band));
  }
  return fit;
}

CoefficientFit fit_coefficients(const SampledSymbol& data, const FundamentalBasis& b, Region region, double band) {
  const PhaseGrid& g = data.grid;
  std::vector<Index> rows;
  for (Index i = 0; i < g.nx; ++i) {
    const double x = g.x(i);
    if (region == Region::all || (region == Region::negative && x <= 0) || (region == Region::positive && x >= 0))
      rows.push_back(i);
  }
  if (rows.size() < 8) throw std::invalid_argument("fewer than 8 x-samples in the region");
  CoefficientFit fit;
  fit.kind = b.kind;
  fit.energy = b.energy;
  for (Index j = 0; j < g.np; ++j) {
    std::vector<double> xs;
    std::vector<cplx> ys;
    for (Index i : rows)
      if (!data.margin(i, j)) {
        xs.push_back(g.x(i));
        ys.push_back(data(i, j));
      }
    if (xs.size() < 8) throw std::invalid_argument("fewer than 8 usable x-samples in a momentum column");
    solve_one(fit, b, g.p(j), xs, Eigen::Map<const Eigen::VectorXcd>(ys.data(), Index(ys.size())));
    fit.near_pole.push_back(near_any(g.p(j), b.degenerate_momenta(), band));
  }
  return fit;
}

cplx reconstruct(const CoefficientFit& fit, const FundamentalBasis& b, Index m, double x, int n) {
  cplx s = 0;
  for (int j = 0; j < 4; ++j) s += fit.c(m, j) * b.elements[j].d_x(n, x, fit.p[m]);
  return s;
}

void CoefficientFit::write_csv(std::ostream& out) const {
  char buf[64];
  out << "p";
  for (int j = 1; j <= 4; ++j) out << ",re_c" << j << ",im_c" << j;
  out << ",fit_residual,cond\n";
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
  };
  for (size_t m = 0; m < p.size(); ++m) {
    num(p[m]);
    for (int j = 0; j < 4; ++j) {
      out << ',';
      num(c(m, j).real());
      out << ',';
      num(c(m, j).imag());
    }
    out << ',';
    num(residual[m]);
    out << ',';
    num(cond[m]);
    out << '\n';
  }
}

InterfaceSide side_of(const ClosedFormSymbol& s) {
  return [s](int n, double x, double p) { return s.x_jet(x, p).derivative(n, 0); };
}

InterfaceSide zero_side() {
  return [](int, double, double) { return cplx(0); };
}

InterfaceReport assemble_and_match(const InterfaceSide& left, const InterfaceSide& right, double x0,
                                   unsigned conditions, const std::vector<double>& ps) {
  InterfaceReport r;
  r.x0 = x0;
  r.conditions = conditions;
  r.p = ps;
  for (double p : ps) {
    const cplx l0 = left(0, x0, p), r0 = right(0, x0, p);
    if (conditions & wall) {
      r.wall.push_back(std::max(std::abs(l0), std::abs(r0)));
      r.max_wall = std::max(r.max_wall, r.wall.back());
    }
    if (conditions & c0) {
      r.c0.push_back(std::abs(l0 - r0));
      r.max_c0 = std::max(r.max_c0, r.c0.back());
    }
    if (conditions & c1) {
      r.c1.push_back(std::abs(left(1, x0, p) - right(1, x0, p)));
      r.max_c1 = std::max(r.max_c1, r.c1.back());
    }
  }
  return r;
}

nlohmann::json InterfaceReport::to_json() const {
  nlohmann::json j = {{"x0", x0}, {"p", p}};
  if (conditions & InterfaceCondition::wall) j["wall"] = {{"max", max_wall}, {"per_p", this->wall}};
  if (conditions & InterfaceCondition::c0) j["c0"] = {{"max", max_c0}, {"per_p", this->c0}};
  if (conditions & InterfaceCondition::c1) j["c1"] = {{"max", max_c1}, {"per_p", this->c1}};
  return j;
}

}  // namespace moyal
