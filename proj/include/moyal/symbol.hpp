#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "moyal/grid.hpp"

namespace moyal {

using cplx = std::complex<double>;
// Row i <-> x_i, column j <-> p_j.
using Field = Eigen::MatrixXcd;
using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct SampledSymbol {
  PhaseGrid grid;
  Field values;
  // Cells whose values are not trusted (stencils leaving the grid, tapered bands).
  Mask margin;
  bool real = false;

  SampledSymbol() = default;
  SampledSymbol(const PhaseGrid& g, Field v, bool is_real = false);
  SampledSymbol(const PhaseGrid& g, Field v, Mask m, bool is_real = false);

  cplx operator()(Index i, Index j) const { return values(i, j); }
};

Mask empty_mask(const PhaseGrid& g);
SampledSymbol zeros(const PhaseGrid& g);

template <class F>
SampledSymbol sample(const PhaseGrid& g, F&& f, bool is_real = false) {
  Field v(g.nx, g.np);
  for (Index j = 0; j < g.np; ++j)
    for (Index i = 0; i < g.nx; ++i) v(i, j) = cplx(f(g.x(i), g.p(j)));
  return SampledSymbol(g, std::move(v), is_real);
}

// Validates max|Im| <= tol * max|Re|, drops the imaginary part and sets the tag.
// Throws std::domain_error otherwise.
SampledSymbol as_real(const SampledSymbol& f, double tol = 1e-12);
double imag_ratio(const SampledSymbol& f);

struct Norms {
  double sup = 0;
  double l2 = 0;
  Index i = 0, j = 0;
};

// Interior norms: cells in f.margin and in `excluded` are skipped.
Norms norms(const SampledSymbol& f);
Norms norms(const SampledSymbol& f, const Mask& excluded);

SampledSymbol operator+(const SampledSymbol& a, const SampledSymbol& b);
SampledSymbol operator-(const SampledSymbol& a, const SampledSymbol& b);
SampledSymbol operator*(cplx s, const SampledSymbol& a);
SampledSymbol operator-(const SampledSymbol& a);
SampledSymbol conj(const SampledSymbol& a);
// Pointwise product.
SampledSymbol hadamard(const SampledSymbol& a, const SampledSymbol& b);

// Union of margin masks; throws if grids differ.
Mask merged_margin(const SampledSymbol& a, const SampledSymbol& b);

// Cells with |p - c| < halfwidth for any c in centres.
Mask momentum_bands(const PhaseGrid& g, const std::vector<double>& centres, double halfwidth);
// Cells with x outside [lo, hi].
Mask outside_x(const PhaseGrid& g, double lo, double hi);

}  // namespace moyal
