#include "moyal/symbol.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace moyal {

namespace {

void require_same_grid(const SampledSymbol& a, const SampledSymbol& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("symbols live on different grids");
}

}  // namespace

SampledSymbol::SampledSymbol(const PhaseGrid& g, Field v, bool is_real)
    : SampledSymbol(g, std::move(v), empty_mask(g), is_real) {}

SampledSymbol::SampledSymbol(const PhaseGrid& g, Field v, Mask m, bool is_real)
    : grid(g), values(std::move(v)), margin(std::move(m)), real(is_real) {
  if (values.rows() != g.nx || values.cols() != g.np || margin.rows() != g.nx || margin.cols() != g.np)
    throw std::invalid_argument("field shape does not match grid");
  if (!values.allFinite()) throw std::domain_error("sampled symbol has non-finite values");
}

Mask empty_mask(const PhaseGrid& g) { return Mask::Constant(g.nx, g.np, false); }

SampledSymbol zeros(const PhaseGrid& g) { return SampledSymbol(g, Field::Zero(g.nx, g.np), true); }

double imag_ratio(const SampledSymbol& f) {
  const double re = f.values.real().cwiseAbs().maxCoeff();
  const double im = f.values.imag().cwiseAbs().maxCoeff();
  if (im == 0) return 0;
  return re == 0 ? INFINITY : im / re;
}

SampledSymbol as_real(const SampledSymbol& f, double tol) {
  const double r = imag_ratio(f);
  if (r > tol) throw std::domain_error("symbol is not real: max|Im|/max|Re| = " + std::to_string(r));
  Field v = f.values.real().cast<cplx>();
  return SampledSymbol(f.grid, std::move(v), f.margin, true);
}

Norms norms(const SampledSymbol& f) { return norms(f, empty_mask(f.grid)); }

Norms norms(const SampledSymbol& f, const Mask& excluded) {
  Norms n;
  bool first = true;
  double sum = 0;
  for (Index j = 0; j < f.grid.np; ++j)
    for (Index i = 0; i < f.grid.nx; ++i) {
      if (f.margin(i, j) || excluded(i, j)) continue;
      const double a = std::abs(f.values(i, j));
      sum += a * a;
      if (first || a > n.sup) {
        n.sup = a;
        n.i = i;
        n.j = j;
        first = false;
      }
    }
  n.l2 = std::sqrt(sum * f.grid.dx * f.grid.dp);
  return n;
}

Mask merged_margin(const SampledSymbol& a, const SampledSymbol& b) {
  require_same_grid(a, b);
  return a.margin || b.margin;
}

SampledSymbol operator+(const SampledSymbol& a, const SampledSymbol& b) {
  return SampledSymbol(a.grid, a.values + b.values, merged_margin(a, b), a.real && b.real);
}

SampledSymbol operator-(const SampledSymbol& a, const SampledSymbol& b) {
  return SampledSymbol(a.grid, a.values - b.values, merged_margin(a, b), a.real && b.real);
}

SampledSymbol operator*(cplx s, const SampledSymbol& a) {
  return SampledSymbol(a.grid, s * a.values, a.margin, a.real && s.imag() == 0);
}

SampledSymbol operator-(const SampledSymbol& a) { return SampledSymbol(a.grid, -a.values, a.margin, a.real); }

SampledSymbol conj(const SampledSymbol& a) {
  return SampledSymbol(a.grid, a.values.conjugate(), a.margin, a.real);
}

SampledSymbol hadamard(const SampledSymbol& a, const SampledSymbol& b) {
  return SampledSymbol(a.grid, a.values.cwiseProduct(b.values), merged_margin(a, b), a.real && b.real);
}

Mask momentum_bands(const PhaseGrid& g, const std::vector<double>& centres, double halfwidth) {
  Mask m = empty_mask(g);
  for (Index j = 0; j < g.np; ++j)
    for (double c : centres)
      if (std::abs(g.p(j) - c) < halfwidth) m.col(j).setConstant(true);
  return m;
}

Mask outside_x(const PhaseGrid& g, double lo, double hi) {
  Mask m = empty_mask(g);
  for (Index i = 0; i < g.nx; ++i)
    if (g.x(i) < lo || g.x(i) > hi) m.row(i).setConstant(true);
  return m;
}

}  // namespace moyal
