#include "moyal/catalog.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace moyal {

namespace {

using XJet = ClosedFormSymbol::XJet;
using MixedJet = ClosedFormSymbol::MixedJet;
constexpr cplx I{0, 1};
constexpr double pi = std::numbers::pi;

XJet xvar(double x) { return XJet::variable(Axis::x, x); }

// Im{c e^{2i(p-q)x}} / (p - r), by the sinc rule when r == q.
XJet im_exp_over(cplx c, double q, double r, const XJet& x, double p) {
  const XJet th = x * cplx(2 * (p - q));
  if (r == q) {
    XJet s = sin_ratio(p - q, x) * cplx(c.real());
    if (c.imag() != 0) s += cos(th) * cplx(c.imag() / (p - q));
    return s;
  }
  return (sin(th) * cplx(c.real()) + cos(th) * cplx(c.imag())) * cplx(1 / (p - r));
}

// Im{c e^{2i(p-k)x} + conj(c) e^{2i(p+k)x}} / p, jointly finite at p = 0.
XJet conjugate_pair_over_p(cplx c, double k, const XJet& x, double p) {
  const XJet two_kx = x * cplx(2 * k);
  return sin_ratio(p, x) * (cos(two_kx) * cplx(2 * c.real()) + sin(two_kx) * cplx(2 * c.imag()));
}

// f at p from its values at p0 +- h, p0 +- 2h.
template <class F>
XJet lagrange_near(F&& f, double p0, double p, double h) {
  const double nodes[4] = {p0 - 2 * h, p0 - h, p0 + h, p0 + 2 * h};
  XJet r;
  for (int a = 0; a < 4; ++a) {
    double w = 1;
    for (int b = 0; b < 4; ++b)
      if (b != a) w *= (p - nodes[b]) / (nodes[a] - nodes[b]);
    r += f(nodes[a]) * cplx(w);
  }
  return r;
}

PolySymbol free_h() { return PolySymbol::monomial(0, 2); }
PolySymbol step_h(double v0) { return free_h() + PolySymbol(cplx(v0)); }

ClosedFormSymbol base(std::string id, nlohmann::json params, Region region, double energy, PolySymbol h) {
  ClosedFormSymbol s;
  s.id = std::move(id);
  s.params = std::move(params);
  s.region = region;
  s.energy = energy;
  s.hamiltonian = std::move(h);
  return s;
}

void require_positive(double v, const char* name) {
  if (!(v > 0) || !std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be positive and finite");
}

}  // namespace

const double neumann = std::numeric_limits<double>::infinity();

std::string to_string(Region r) {
  switch (r) {
    case Region::negative: return "x<0";
    case Region::positive: return "x>0";
    default: return "all";
  }
}

bool ClosedFormSymbol::in_region(double x) const {
  switch (region) {
    case Region::negative: return x <= 0;
    case Region::positive: return x >= 0;
    default: return true;
  }
}

cplx ClosedFormSymbol::eval(double x, double p) const {
  if (zero_outside && !in_region(x)) return 0.0;
  return x_jet(x, p).value();
}

cplx ClosedFormSymbol::d_x(int n, double x, double p) const {
  if (n < 0 || n > 4) throw std::invalid_argument("x-derivatives are tabulated to order 4");
  if (zero_outside && !in_region(x)) return 0.0;
  return x_jet(x, p).derivative(n, 0);
}

std::vector<double> ClosedFormSymbol::poles() const {
  std::vector<double> all = removable_poles;
  all.insert(all.end(), genuine_poles.begin(), genuine_poles.end());
  return all;
}

SampledSymbol ClosedFormSymbol::sample(const PhaseGrid& g) const {
  Field v(g.nx, g.np);
  Mask m = empty_mask(g);
  for (Index j = 0; j < g.np; ++j)
    for (Index i = 0; i < g.nx; ++i) {
      cplx z = eval(g.x(i), g.p(j));
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        z = 0;
        m(i, j) = true;
      }
      v(i, j) = real ? cplx(z.real()) : z;
    }
  return SampledSymbol(g, std::move(v), std::move(m), real);
}

TabulatedSource ClosedFormSymbol::tabulate(const PhaseGrid& g, std::optional<DerivativeBackend> p_fallback) const {
  const int nb = mixed_jet ? 5 : 1;
  std::vector<Field> d(5 * nb, Field::Zero(g.nx, g.np));
  Mask bad = empty_mask(g);
  for (Index j = 0; j < g.np; ++j)
    for (Index i = 0; i < g.nx; ++i) {
      const double x = g.x(i), p = g.p(j);
      if (zero_outside && !in_region(x)) continue;
      if (mixed_jet) {
        const MixedJet r = mixed_jet(x, p);
        for (int a = 0; a < 5; ++a)
          for (int b = 0; b < 5; ++b) d[a * nb + b](i, j) = r.derivative(a, b);
      } else {
        const XJet r = x_jet(x, p);
        for (int a = 0; a < 5; ++a) d[a](i, j) = r.derivative(a, 0);
      }
      for (const Field& f : d)
        if (!std::isfinite(std::abs(f(i, j)))) bad(i, j) = true;
    }
  TabulatedSource s(g, real, std::move(p_fallback));
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < nb; ++b) {
      Field v = std::move(d[a * nb + b]);
      for (Index j = 0; j < g.np; ++j)
        for (Index i = 0; i < g.nx; ++i)
          if (bad(i, j)) v(i, j) = 0;
      if (real) v = v.real().cast<cplx>();
      s.insert(a, b, SampledSymbol(g, std::move(v), bad, real));
    }
  return s;
}

Mask ClosedFormSymbol::exclusion(const PhaseGrid& g, double band) const {
  Mask m = momentum_bands(g, poles(), band);
  if (region == Region::negative) m = m || outside_x(g, -std::numeric_limits<double>::infinity(), 0);
  if (region == Region::positive) m = m || outside_x(g, 0, std::numeric_limits<double>::infinity());
  return m;
}

PointInteractionParams::PointInteractionParams(double a, double b, double c, double d)
    : alpha(a), beta(b), gamma(c), delta(d) {
  if (!(std::abs(a * c - b * d - 1) <= 1e-12))
    throw std::invalid_argument("point interaction requires alpha gamma - beta delta = 1 (got " +
                                std::to_string(a * c - b * d) + ")");
}

nlohmann::json PointInteractionParams::to_json() const {
  return {{"alpha", alpha}, {"beta", beta}, {"gamma", gamma}, {"delta", delta}};
}

PointInteractionParams random_point_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2, 2);
  double a = 0;
  while (std::abs(a) < 0.2) a = u(rng);
  const double b = u(rng), d = u(rng);
  return PointInteractionParams(a, b, (1 + b * d) / a, d);
}

PointInteractionParams random_bound_params(std::mt19937_64& rng) {
  for (;;) {
    PointInteractionParams q = random_point_params(rng);
    try {
      const double kappa = point_bound_kappa(q);
      if (kappa > 0.2 && kappa < 5) return q;
    } catch (const std::domain_error&) {
    }
  }
}

double robin_phase(double k, double L) {
  if (std::isinf(L)) return 0;
  return 2 * std::atan2(1.0, k * L);
}

ClosedFormSymbol robin_scatter(double k, double L) {
  require_positive(k, "k");
  const double delta = robin_phase(k, L);
  nlohmann::json params = {{"k", k}, {"L", std::isinf(L) ? nlohmann::json("inf") : nlohmann::json(L)}};
  ClosedFormSymbol s = base("robin_scatter", params, Region::negative, k * k, free_h());
  s.zero_outside = true;
  s.removable_poles = {-k, 0, k};
  s.x_jet = [k, delta](double x0, double p) {
    const XJet x = xvar(x0);
    return sin_ratio(p - k, x) + sin_ratio(p + k, x) + cos(x * cplx(2 * k) - cplx(delta)) * sin_ratio(p, x) * cplx(2);
  };
  s.wave = WaveFunction{Profile::plane_wave(k) + Profile::plane_wave(-k, std::polar(1.0, delta)), Profile(), 0};
  s.transform_scale = -1;
  return s;
}

ClosedFormSymbol robin_scatter_four_term(double k, double L) {
  ClosedFormSymbol s = robin_scatter(k, L);
  const double delta = robin_phase(k, L);
  s.id = "robin_scatter_four_term";
  s.x_jet = [k, delta](double x0, double p) {
    const XJet x = xvar(x0);
    return sin_ratio(p - k, x) + sin_ratio(p + k, x) +
           (sin(x * cplx(2 * (p - k)) + cplx(delta)) + sin(x * cplx(2 * (p + k)) - cplx(delta))) * cplx(1 / p);
  };
  return s;
}

ClosedFormSymbol robin_bound(double L) {
  require_positive(L, "L");
  ClosedFormSymbol s = base("robin_bound", {{"L", L}}, Region::negative, -1 / (L * L), free_h());
  s.zero_outside = true;
  s.removable_poles = {0};
  s.x_jet = [L](double x0, double p) {
    const XJet x = xvar(x0);
    return sin_ratio(p, x) * exp(x * cplx(2 / L)) * cplx(-2 / L);
  };
  s.wave = WaveFunction{Profile::exponential(-1 / L, std::sqrt(2 / L)), Profile(), 0};
  return s;
}

Scattering point_amplitudes(const PointInteractionParams& q, double k) {
  const cplx D = -q.beta + q.delta * k * k + I * k * (q.alpha + q.gamma);
  if (std::abs(D) < 1e-300) throw std::domain_error("scattering denominator vanishes");
  return {(q.beta + q.delta * k * k + I * k * (q.alpha - q.gamma)) / D, -2.0 * I * k / D, D};
}

double point_bound_kappa(const PointInteractionParams& q) {
  const double s = q.alpha + q.gamma;
  std::vector<double> roots;
  if (std::abs(q.delta) < 1e-14) {
    if (s != 0) roots.push_back(-q.beta / s);
  } else {
    const double disc = s * s - 4 * q.delta * q.beta;
    if (disc >= 0) {
      const double r = std::sqrt(disc);
      roots.push_back((-s + r) / (2 * q.delta));
      roots.push_back((-s - r) / (2 * q.delta));
    }
  }
  double best = std::numeric_limits<double>::infinity();
  for (double r : roots)
    if (r > 0 && r < best) best = r;
  if (std::isinf(best)) throw std::domain_error("no bound state");
  return best;
}

EntryPair point_bound(const PointInteractionParams& q) {
  const double kappa = point_bound_kappa(q);
  const cplx m0 = 1.0, p0 = q.alpha + q.beta / kappa;
  nlohmann::json params = q.to_json();
  params["kappa"] = kappa;
  const double e = -kappa * kappa;
  const WaveFunction wave{Profile::exponential(-kappa, m0), Profile::exponential(kappa, p0), 0};

  ClosedFormSymbol left = base("point_bound", params, Region::negative, e, free_h());
  left.removable_poles = {0};
  left.x_jet = [=](double x0, double p) {
    const XJet x = xvar(x0);
    const XJet up = exp(x * cplx(2 * kappa, 2 * p)), down = exp(x * cplx(2 * kappa, -2 * p));
    return sin_ratio(p, x) * exp(x * cplx(2 * kappa)) * cplx(-std::norm(m0)) +
           up * (std::conj(m0) * p0 / (2.0 * I * (p - I * kappa))) -
           down * (m0 * std::conj(p0) / (2.0 * I * (p + I * kappa)));
  };
  left.wave = wave;

  ClosedFormSymbol right = base("point_bound", params, Region::positive, e, free_h());
  right.removable_poles = {0};
  right.x_jet = [=](double x0, double p) {
    const XJet x = xvar(x0);
    const XJet up = exp(x * cplx(-2 * kappa, 2 * p)), down = exp(x * cplx(-2 * kappa, -2 * p));
    return sin_ratio(p, x) * exp(x * cplx(-2 * kappa)) * cplx(std::norm(p0)) -
           up * (std::conj(p0) * m0 / (2.0 * I * (p + I * kappa))) +
           down * (p0 * std::conj(m0) / (2.0 * I * (p - I * kappa)));
  };
  right.wave = wave;
  return {left, right};
}

EntryPair point_scatter_forms(double k, cplx R, cplx T) {
  nlohmann::json params = {{"k", k}, {"R", {R.real(), R.imag()}}, {"T", {T.real(), T.imag()}}};
  ClosedFormSymbol left = base("point_scatter", params, Region::negative, k * k, free_h());
  left.removable_poles = {-k};
  left.genuine_poles = {0, k};
  left.x_jet = [=](double x0, double p) {
    const XJet x = xvar(x0);
    return -(im_exp_over(1.0 - T, k, k, x, p) + im_exp_over(R, k, 0, x, p) + im_exp_over(std::norm(R), -k, -k, x, p) +
             im_exp_over((1.0 - T) * std::conj(R), -k, 0, x, p));
  };
  ClosedFormSymbol right = base("point_scatter", params, Region::positive, k * k, free_h());
  right.genuine_poles = {0, k};
  right.x_jet = [=](double x0, double p) {
    const XJet x = xvar(x0);
    return -(im_exp_over((1.0 - T) * std::conj(T), k, k, x, p) + im_exp_over(R * std::conj(T), k, 0, x, p));
  };
  const WaveFunction wave{Profile::plane_wave(k) + Profile::plane_wave(-k, R), Profile::plane_wave(k, T), 0};
  left.wave = right.wave = wave;
  return {left, right};
}

EntryPair point_scatter(const PointInteractionParams& q, double k) {
  require_positive(k, "k");
  const Scattering a = point_amplitudes(q, k);
  EntryPair e = point_scatter_forms(k, a.R, a.T);
  nlohmann::json params = q.to_json();
  params["k"] = k;
  e.first.params = e.second.params = params;
  return e;
}

EntryPair jump_below(double k, double V0) {
  require_positive(k, "k");
  if (!(V0 > k * k)) throw std::invalid_argument("jump_below needs V0 > k^2");
  const double kappa = std::sqrt(V0 - k * k);
  const double alpha = std::arg((I * k + kappa) / (I * k - kappa));
  const double k2 = kappa * kappa;
  nlohmann::json params = {{"k", k}, {"V0", V0}, {"kappa", kappa}, {"alpha", alpha}};

  ClosedFormSymbol left = base("jump_below", params, Region::negative, k * k, free_h());
  left.removable_poles = {-k, 0, k};
  auto raw = [=](const XJet& x, double p) {
    const double A = k2 + (2 * p - k) * (2 * p - k), B = k2 + (2 * p + k) * (2 * p + k);
    return sin_ratio(p - k, x) * cplx(-k * (k * (2 * p - k) + k2) / (4 * p * A)) -
           sin_ratio(p + k, x) * cplx(k * (k * (2 * p + k) - k2) / (4 * p * B)) +
           cos(x * cplx(2 * (p - k))) * cplx(kappa * k / (2 * p * A)) -
           cos(x * cplx(2 * (p + k))) * cplx(kappa * k / (2 * p * B));
  };
  left.x_jet = [=](double x0, double p) {
    const XJet x = xvar(x0);
    constexpr double h = 1e-3;
    if (std::abs(p) < h) return lagrange_near([&](double q) { return raw(x, q); }, 0.0, p, h);
    return raw(x, p);
  };

  ClosedFormSymbol right = base("jump_below", params, Region::positive, k * k, step_h(V0));
  right.removable_poles = {0};
  right.x_jet = [=](double x0, double p) {
    const XJet x = xvar(x0);
    const double A = (2 * p + k) * (2 * p + k) + k2, B = (2 * p - k) * (2 * p - k) + k2;
    return exp(x * cplx(-2 * kappa)) * (cos(x * cplx(2 * p)) * cplx(4 * kappa * k * k / (A * B)) +
                                        sin_ratio(p, x) * cplx(k * k * (k * k + k2 - 4 * p * p) / (A * B)));
  };
  const WaveFunction wave{Profile::cosine(k, alpha / 2), Profile::exponential(kappa, std::cos(alpha / 2)), 0};
  left.wave = right.wave = wave;
  left.transform_scale = right.transform_scale = std::numeric_limits<double>::quiet_NaN();
  return {left, right};
}

EntryPair jump_above_forms(double k, double l, cplx R, cplx T) {
  nlohmann::json params = {{"k", k}, {"l", l}, {"R", {R.real(), R.imag()}}, {"T", {T.real(), T.imag()}}};
  const double up = (k + l) / 2, down = (l - k) / 2;
  ClosedFormSymbol left = base("jump_above", params, Region::negative, k * k, free_h());
  left.removable_poles = {-k, 0, k};
  left.genuine_poles = {up, down};
  left.x_jet = [=](double x0, double p) {
    const XJet x = xvar(x0);
    return -(im_exp_over(1.0, k, k, x, p) + im_exp_over(-T, k, up, x, p) + conjugate_pair_over_p(R, k, x, p) +
             im_exp_over(std::norm(R), -k, -k, x, p) + im_exp_over(-T * std::conj(R), -k, down, x, p));
  };
  ClosedFormSymbol right = base("jump_above", params, Region::positive, k * k, step_h(k * k - l * l));
  right.removable_poles = {l};
  right.genuine_poles = {up, down};
  right.x_jet = [=](double x0, double p) {
    const XJet x = xvar(x0);
    return -(im_exp_over(-std::norm(T), l, l, x, p) + im_exp_over(std::conj(T) * R, l, down, x, p) +
             im_exp_over(std::conj(T), l, up, x, p));
  };
  const WaveFunction wave{Profile::plane_wave(k) + Profile::plane_wave(-k, R), Profile::plane_wave(l, T), 0};
  left.wave = right.wave = wave;
  return {left, right};
}

EntryPair jump_above(double k, double V0) {
  require_positive(k, "k");
  if (!(V0 < k * k)) throw std::invalid_argument("jump_above needs V0 < k^2");
  const double l = std::sqrt(k * k - V0);
  EntryPair e = jump_above_forms(k, l, (k - l) / (k + l), 2 * k / (k + l));
  e.first.params = e.second.params = {{"k", k}, {"V0", V0}, {"l", l}};
  return e;
}

namespace {

// e^{-y^2} erf(i y) for real y.
cplx dawson_like(double y) { return std::exp(-y * y) - faddeeva(cplx(-y, 0)); }

template <class J>
J match_free_right(const J& x, const J& p) {
  const double r2 = std::sqrt(2.0);
  const cplx ir2(0, r2);
  const J env_m = exp(x * x * cplx(-2) - x * p * cplx(0, 2));
  const J env_p = exp(x * x * cplx(-2) + x * p * cplx(0, 2));
  const J ix = x * I;
  J s = env_m * faddeeva(x * ir2 - (p * cplx(2) + cplx(1)) * cplx(1 / r2)) +
        env_p * faddeeva(x * ir2 + (p * cplx(2) + cplx(1)) * cplx(1 / r2)) +
        env_m * faddeeva(x * ir2 - (p * cplx(2) - cplx(1)) * cplx(1 / r2)) +
        env_p * faddeeva(x * ir2 + (p * cplx(2) - cplx(1)) * cplx(1 / r2));
  const J gauss = exp(-(x * x) - p * p) * cplx(2) - env_m * faddeeva(ix - p) - env_p * faddeeva(ix + p);
  s += gauss * cplx(r2);
  return s * cplx(pi / (2 * std::sqrt(2 * pi)));
}

}  // namespace

EntryPair match_free_sho() {
  const double c = 2 * std::sqrt(2 * pi);
  ClosedFormSymbol left = base("match_free_sho", nlohmann::json::object(), Region::negative, 1, free_h());
  left.removable_poles = {-1, 0, 1};
  left.x_jet = [c](double x0, double p) {
    const XJet x = xvar(x0);
    const double ym = (2 * p - 1) / std::sqrt(2.0), yp = (2 * p + 1) / std::sqrt(2.0);
    const XJet sm = sin(x * cplx(2 * (p - 1))), sp = sin(x * cplx(2 * (p + 1)));
    XJet d = cos(x * cplx(2 * (p - 1))) * cplx(c * std::exp(-ym * ym)) +
             cos(x * cplx(2 * (p + 1))) * cplx(c * std::exp(-yp * yp)) - sin_ratio(p - 1, x) - sin_ratio(p + 1, x) -
             sin_ratio(p, x) * cos(x * cplx(2)) * cplx(2) - sm * (I * c * dawson_like(ym)) - sp * (I * c * dawson_like(yp));
    return d * cplx(0.25);
  };
  ClosedFormSymbol right =
      base("match_free_sho", nlohmann::json::object(), Region::positive, 1, free_h() + PolySymbol::monomial(2, 0));
  right.x_jet = [](double x0, double p) {
    return match_free_right(xvar(x0), Jet<cplx, 4, 0>(cplx(p)));
  };
  right.mixed_jet = [](double x0, double p) {
    return match_free_right(MixedJet::variable(Axis::x, x0), MixedJet::variable(Axis::p, p));
  };
  const WaveFunction wave{Profile::cosine(1, 0), Profile::gaussian(), 0};
  left.wave = right.wave = wave;
  return {left, right};
}

namespace {

double num(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw std::invalid_argument(std::string("missing parameter '") + key + "'");
  if (!j.at(key).is_number()) throw std::invalid_argument(std::string("parameter '") + key + "' must be a number");
  return j.at(key).get<double>();
}

void only_keys(const nlohmann::json& j, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw std::invalid_argument("parameters must be an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* k : keys) ok = ok || key == k;
    if (!ok) throw std::invalid_argument("unknown parameter '" + key + "'");
  }
}

PointInteractionParams point_from(const nlohmann::json& j) {
  return PointInteractionParams(num(j, "alpha"), num(j, "beta"), num(j, "gamma"), num(j, "delta"));
}

std::vector<ClosedFormSymbol> both(EntryPair e) { return {std::move(e.first), std::move(e.second)}; }

}  // namespace

const std::vector<CatalogInfo>& catalog_registry() {
  static const std::vector<CatalogInfo> reg = {
      {"robin_scatter",
       {{"k", "number > 0"}, {"L", "number or \"inf\""}},
       [](const nlohmann::json& j) {
         only_keys(j, {"k", "L"});
         double L = neumann;
         if (j.contains("L") && !(j.at("L").is_string() && j.at("L") == "inf")) L = num(j, "L");
         return std::vector<ClosedFormSymbol>{robin_scatter(num(j, "k"), L)};
       }},
      {"robin_bound",
       {{"L", "number > 0"}},
       [](const nlohmann::json& j) {
         only_keys(j, {"L"});
         return std::vector<ClosedFormSymbol>{robin_bound(num(j, "L"))};
       }},
      {"point_bound",
       {{"alpha", "number"}, {"beta", "number"}, {"gamma", "number"}, {"delta", "number"}},
       [](const nlohmann::json& j) {
         only_keys(j, {"alpha", "beta", "gamma", "delta"});
         return both(point_bound(point_from(j)));
       }},
      {"point_scatter",
       {{"alpha", "number"}, {"beta", "number"}, {"gamma", "number"}, {"delta", "number"}, {"k", "number > 0"}},
       [](const nlohmann::json& j) {
         only_keys(j, {"alpha", "beta", "gamma", "delta", "k"});
         return both(point_scatter(point_from(j), num(j, "k")));
       }},
      {"jump_below",
       {{"k", "number > 0"}, {"V0", "number > k^2"}},
       [](const nlohmann::json& j) {
         only_keys(j, {"k", "V0"});
         return both(jump_below(num(j, "k"), num(j, "V0")));
       }},
      {"jump_above",
       {{"k", "number > 0"}, {"V0", "number < k^2"}},
       [](const nlohmann::json& j) {
         only_keys(j, {"k", "V0"});
         return both(jump_above(num(j, "k"), num(j, "V0")));
       }},
      {"match_free_sho", nlohmann::json::object(),
       [](const nlohmann::json& j) {
         only_keys(j, {});
         return both(match_free_sho());
       }},
  };
  return reg;
}

const CatalogInfo& catalog_lookup(const std::string& id) {
  for (const auto& c : catalog_registry())
    if (c.id == id) return c;
  throw std::invalid_argument("unknown catalog entry '" + id + "'");
}

nlohmann::json catalog_listing() {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : catalog_registry()) out.push_back({{"id", c.id}, {"params", c.schema}});
  return out;
}

}  // namespace moyal
