#include "moyal/bopp.hpp"

#include <algorithm>

namespace moyal {
namespace {

double binomial(int n, int k) {
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

BoppOperator BoppOperator::multiply(const PolySymbol& c) {
  BoppOperator op;
  op.add_term(0, 0, c);
  return op;
}

BoppOperator BoppOperator::derivative(int a, int b, cplx c) {
  BoppOperator op;
  op.add_term(a, b, PolySymbol(c));
  return op;
}

void BoppOperator::add_term(int a, int b, const PolySymbol& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace({a, b}, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

PolySymbol BoppOperator::coefficient(int a, int b) const {
  auto it = terms_.find({a, b});
  return it == terms_.end() ? PolySymbol() : it->second;
}

int BoppOperator::max_order(Axis axis) const {
  int m = 0;
  for (const auto& [key, c] : terms_) m = std::max(m, axis == Axis::x ? key.first : key.second);
  return m;
}

BoppOperator BoppOperator::real_part() const {
  BoppOperator r;
  for (const auto& [key, c] : terms_) r.add_term(key.first, key.second, c.real_part());
  return r;
}

BoppOperator BoppOperator::imag_part() const {
  BoppOperator r;
  for (const auto& [key, c] : terms_) r.add_term(key.first, key.second, c.imag_part());
  return r;
}

BoppOperator BoppOperator::parity_part(int parity) const {
  BoppOperator r;
  for (const auto& [key, c] : terms_)
    if ((key.first + key.second) % 2 == parity % 2) r.add_term(key.first, key.second, c);
  return r;
}

BoppOperator& BoppOperator::operator+=(const BoppOperator& o) {
  for (const auto& [key, c] : o.terms_) add_term(key.first, key.second, c);
  return *this;
}

BoppOperator operator*(cplx s, const BoppOperator& a) {
  BoppOperator r;
  for (const auto& [key, c] : a.terms_) r.add_term(key.first, key.second, s * c);
  return r;
}

// (A d^al)(B d^be) = sum_{ga <= al} C(al, ga) A (d^ga B) d^{al - ga + be}.
BoppOperator operator*(const BoppOperator& a, const BoppOperator& b) {
  BoppOperator r;
  for (const auto& [ka, ca] : a.terms_)
    for (const auto& [kb, cb] : b.terms_)
      for (int gx = 0; gx <= ka.first; ++gx)
        for (int gp = 0; gp <= ka.second; ++gp) {
          const PolySymbol d = cb.derivative(gx, gp);
          if (d.is_zero()) continue;
          const double w = binomial(ka.first, gx) * binomial(ka.second, gp);
          r.add_term(ka.first - gx + kb.first, ka.second - gp + kb.second, cplx(w) * (ca * d));
        }
  return r;
}

PolySymbol BoppOperator::apply(const PolySymbol& f) const {
  PolySymbol r;
  for (const auto& [key, c] : terms_) r += c * f.derivative(key.first, key.second);
  return r;
}

SampledSymbol BoppOperator::apply(const DerivativeSource& f) const {
  const PhaseGrid& g = f.grid();
  Field out = Field::Zero(g.nx, g.np);
  Mask margin = empty_mask(g);
  for (const auto& [key, c] : terms_) {
    const SampledSymbol d = f.derivative(key.first, key.second);
    margin = margin || d.margin;
    if (c.degree() == 0) {
      out += c.coeff(0, 0) * d.values;
    } else {
      out += sample(c, g).values.cwiseProduct(d.values);
    }
  }
  return SampledSymbol(g, std::move(out), std::move(margin));
}

double max_coeff_diff(const BoppOperator& a, const BoppOperator& b) {
  const BoppOperator d = a - b;
  double m = 0;
  for (const auto& [key, c] : d.terms_) m = std::max(m, c.max_abs_coeff());
  return m;
}

}  // namespace moyal
