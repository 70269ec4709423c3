#pragma once

#include <random>

#include "moyal/bopp.hpp"

namespace moyal {

// sign = +1 for the star product, -1 for its conjugate (phase sign flipped).
// A * f = A(x + (i/2) d_p, p - (i/2) d_x) f.
BoppOperator left_star_operator(const PolySymbol& a, int sign = 1);
// f * A = A(x - (i/2) d_p, p + (i/2) d_x) f.
BoppOperator right_star_operator(const PolySymbol& a, int sign = 1);
// f -> (A, f) and f -> [A, f], so that A * f = (A, f) + i [A, f].
BoppOperator sym_bracket_operator(const PolySymbol& a);
BoppOperator moyal_bracket_operator(const PolySymbol& a);

// Largest polynomial degree accepted against a sampled symbol.
inline constexpr int max_sampled_star_degree = 6;

SampledSymbol star_left(const PolySymbol& a, const DerivativeSource& f);
SampledSymbol star_left(const PolySymbol& a, const SampledSymbol& f, const DerivativeBackend& backend);
SampledSymbol star_right(const DerivativeSource& f, const PolySymbol& a);
SampledSymbol star_right(const SampledSymbol& f, const PolySymbol& a, const DerivativeBackend& backend);

PolySymbol star_poly(const PolySymbol& a, const PolySymbol& b);
PolySymbol sym_bracket(const PolySymbol& f, const PolySymbol& g);
PolySymbol moyal_bracket(const PolySymbol& f, const PolySymbol& g);

SampledSymbol sym_bracket(const PolySymbol& f, const DerivativeSource& g);
SampledSymbol sym_bracket(const DerivativeSource& f, const PolySymbol& g);
SampledSymbol moyal_bracket(const PolySymbol& f, const DerivativeSource& g);
SampledSymbol moyal_bracket(const DerivativeSource& f, const PolySymbol& g);
// Refused: the series does not terminate. Always throws std::invalid_argument.
SampledSymbol sym_bracket(const DerivativeSource& f, const DerivativeSource& g);
SampledSymbol moyal_bracket(const DerivativeSource& f, const DerivativeSource& g);

struct IdentityReport {
  double jacobi = 0;         // [[f,g],h] + cyclic
  double mixed = 0;          // [(f,g),h] + ([h,f],g) + ([h,g],f)
  double cyclic = 0;         // [(f,g),h] + cyclic
  double associativity = 0;  // (f*g)*h - f*(g*h)
  double scale = 0;          // (max input coefficient)^3
  double worst_relative() const;
};

IdentityReport check_associativity_identities(const PolySymbol& f, const PolySymbol& g, const PolySymbol& h);

// Asserts Im(p^2 * f) = -p d_x f exactly on a real test polynomial; throws
// std::logic_error otherwise.
void check_star_sign_convention();

// Real coefficients uniform in [-1, 1] on every monomial of total degree <= degree.
PolySymbol random_poly(int degree, std::mt19937_64& rng);

}  // namespace moyal
