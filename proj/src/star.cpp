#include "moyal/star.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace moyal {
namespace {

double binomial(int n, int k) {
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Term (n, j) of the star exponential: (i s / 2)^n / n! C(n, j) (-1)^j.
cplx series_weight(int n, int j, int sign) {
  cplx w = 1;
  for (int m = 1; m <= n; ++m) w *= cplx(0, 0.5 * sign) / double(m);
  return w * binomial(n, j) * (j % 2 ? -1.0 : 1.0);
}

void require_sampled_degree(const PolySymbol& a) {
  if (a.degree() > max_sampled_star_degree)
    throw std::invalid_argument("polynomial degree " + std::to_string(a.degree()) +
                                " exceeds the sampled star product bound " +
                                std::to_string(max_sampled_star_degree));
}

}  // namespace

BoppOperator left_star_operator(const PolySymbol& a, int sign) {
  BoppOperator op;
  for (int n = 0; n <= a.degree(); ++n)
    for (int j = 0; j <= n; ++j) {
      const PolySymbol c = a.derivative(n - j, j);
      if (!c.is_zero()) op.add_term(j, n - j, series_weight(n, j, sign) * c);
    }
  return op;
}

BoppOperator right_star_operator(const PolySymbol& a, int sign) {
  BoppOperator op;
  for (int n = 0; n <= a.degree(); ++n)
    for (int j = 0; j <= n; ++j) {
      const PolySymbol c = a.derivative(j, n - j);
      if (!c.is_zero()) op.add_term(n - j, j, series_weight(n, j, sign) * c);
    }
  return op;
}

BoppOperator sym_bracket_operator(const PolySymbol& a) { return left_star_operator(a).parity_part(0); }

BoppOperator moyal_bracket_operator(const PolySymbol& a) {
  return cplx(0, -1) * left_star_operator(a).parity_part(1);
}

SampledSymbol star_left(const PolySymbol& a, const DerivativeSource& f) {
  require_sampled_degree(a);
  return left_star_operator(a).apply(f);
}

SampledSymbol star_left(const PolySymbol& a, const SampledSymbol& f, const DerivativeBackend& backend) {
  return star_left(a, SampledSource(f, backend));
}

SampledSymbol star_right(const DerivativeSource& f, const PolySymbol& a) {
  require_sampled_degree(a);
  return right_star_operator(a).apply(f);
}

SampledSymbol star_right(const SampledSymbol& f, const PolySymbol& a, const DerivativeBackend& backend) {
  return star_right(SampledSource(f, backend), a);
}

PolySymbol star_poly(const PolySymbol& a, const PolySymbol& b) {
  if (a.degree() + b.degree() > PolySymbol::max_degree)
    throw std::invalid_argument("star product degree " + std::to_string(a.degree() + b.degree()) +
                                " exceeds " + std::to_string(PolySymbol::max_degree));
  return left_star_operator(a).apply(b);
}

PolySymbol sym_bracket(const PolySymbol& f, const PolySymbol& g) { return sym_bracket_operator(f).apply(g); }
PolySymbol moyal_bracket(const PolySymbol& f, const PolySymbol& g) { return moyal_bracket_operator(f).apply(g); }

SampledSymbol sym_bracket(const PolySymbol& f, const DerivativeSource& g) {
  require_sampled_degree(f);
  SampledSymbol r = sym_bracket_operator(f).apply(g);
  if (f.is_real() && g.real()) r = as_real(r, 1e-10);
  return r;
}

SampledSymbol sym_bracket(const DerivativeSource& f, const PolySymbol& g) { return sym_bracket(g, f); }

SampledSymbol moyal_bracket(const PolySymbol& f, const DerivativeSource& g) {
  require_sampled_degree(f);
  SampledSymbol r = moyal_bracket_operator(f).apply(g);
  if (f.is_real() && g.real()) r = as_real(r, 1e-10);
  return r;
}

SampledSymbol moyal_bracket(const DerivativeSource& f, const PolySymbol& g) { return -moyal_bracket(g, f); }

SampledSymbol sym_bracket(const DerivativeSource&, const DerivativeSource&) {
  throw std::invalid_argument("both arguments are sampled; the star series does not terminate");
}

SampledSymbol moyal_bracket(const DerivativeSource&, const DerivativeSource&) {
  throw std::invalid_argument("both arguments are sampled; the star series does not terminate");
}

double IdentityReport::worst_relative() const {
  const double s = scale > 0 ? scale : 1;
  return std::max({jacobi, mixed, cyclic, associativity}) / s;
}

IdentityReport check_associativity_identities(const PolySymbol& f, const PolySymbol& g, const PolySymbol& h) {
  const auto mb = [](const PolySymbol& a, const PolySymbol& b) { return moyal_bracket(a, b); };
  const auto sb = [](const PolySymbol& a, const PolySymbol& b) { return sym_bracket(a, b); };
  IdentityReport r;
  r.jacobi = (mb(mb(f, g), h) + mb(mb(g, h), f) + mb(mb(h, f), g)).max_abs_coeff();
  r.mixed = (mb(sb(f, g), h) + sb(mb(h, f), g) + sb(mb(h, g), f)).max_abs_coeff();
  r.cyclic = (mb(sb(f, g), h) + mb(sb(h, f), g) + mb(sb(g, h), f)).max_abs_coeff();
  r.associativity = (star_poly(star_poly(f, g), h) - star_poly(f, star_poly(g, h))).max_abs_coeff();
  const double m = std::max({f.max_abs_coeff(), g.max_abs_coeff(), h.max_abs_coeff()});
  r.scale = m * m * m;
  return r;
}

void check_star_sign_convention() {
  PolySymbol f = PolySymbol::monomial(3, 1, 0.7) + PolySymbol::monomial(2, 2, -1.3) + PolySymbol::monomial(1, 0, 2.0) +
                 PolySymbol::monomial(4, 0, 0.25);
  const PolySymbol p2 = PolySymbol::monomial(0, 2);
  const PolySymbol lhs = star_poly(p2, f).imag_part();
  const PolySymbol rhs = cplx(-1.0) * (PolySymbol::p() * f.derivative(1, 0));
  if (max_coeff_diff(lhs, rhs) > 1e-14)
    throw std::logic_error("star product sign self-test failed: Im(p^2 * f) != -p d_x f");
}

PolySymbol random_poly(int degree, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PolySymbol a;
  for (int m = 0; m <= degree; ++m)
    for (int n = 0; m + n <= degree; ++n) a.set(m, n, u(rng));
  return a;
}

}  // namespace moyal
