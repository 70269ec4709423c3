#pragma once

#include <map>
#include <utility>

#include "moyal/poly_symbol.hpp"
#include "moyal/source.hpp"

namespace moyal {

// sum_k c_k(x, p) d^{a_k}/dx^{a_k} d^{b_k}/dp^{b_k}, keyed by (a_k, b_k).
class BoppOperator {
 public:
  using Key = std::pair<int, int>;

  BoppOperator() = default;
  static BoppOperator identity() { return multiply(PolySymbol(1.0)); }
  static BoppOperator multiply(const PolySymbol& c);
  static BoppOperator derivative(int a, int b, cplx c = 1.0);

  void add_term(int a, int b, const PolySymbol& c);
  const std::map<Key, PolySymbol>& terms() const { return terms_; }
  PolySymbol coefficient(int a, int b) const;
  int max_order(Axis axis) const;
  bool is_zero() const { return terms_.empty(); }

  // Coefficient-wise parts: Re(Op f) = (Re Op) f when f is real.
  BoppOperator real_part() const;
  BoppOperator imag_part() const;
  // Keeps the terms of total derivative order with the given parity.
  BoppOperator parity_part(int parity) const;

  BoppOperator& operator+=(const BoppOperator& o);
  friend BoppOperator operator+(BoppOperator a, const BoppOperator& b) { return a += b; }
  friend BoppOperator operator-(BoppOperator a, const BoppOperator& b) { return a += cplx(-1.0) * b; }
  friend BoppOperator operator*(cplx s, const BoppOperator& a);
  // Composition: (a * b) f = a(b(f)).
  friend BoppOperator operator*(const BoppOperator& a, const BoppOperator& b);

  PolySymbol apply(const PolySymbol& f) const;
  SampledSymbol apply(const DerivativeSource& f) const;

  // Largest coefficient difference over all terms.
  friend double max_coeff_diff(const BoppOperator& a, const BoppOperator& b);

 private:
  std::map<Key, PolySymbol> terms_;
};

}  // namespace moyal
