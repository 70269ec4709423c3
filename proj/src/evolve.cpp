#include "moyal/evolve.hpp"

#include <cstdio>
#include <ostream>

#include "moyal/star.hpp"

namespace moyal {

namespace {

constexpr cplx I{0, 1};

WaveFunction scaled(const WaveFunction& w, cplx c) { return {c * w.left, c * w.right, w.split}; }

double sup_of(const SampledSymbol& f, const Mask& skip) {
  double m = 0;
  for (Index j = 0; j < f.grid.np; ++j)
    for (Index i = 0; i < f.grid.nx; ++i)
      if (!skip(i, j)) m = std::max(m, std::abs(f(i, j)));
  return m;
}

ResidualReport report(std::string equation, const std::string& entry, SampledSymbol residual, const SampledSymbol& rho,
                      const std::vector<PolySymbol>& factors) {
  ResidualReport r;
  r.entry = entry;
  r.equation = std::move(equation);
  r.excluded = empty_mask(rho.grid);
  const Norms n = norms(residual, r.excluded);
  r.sup = n.sup;
  r.l2 = n.l2;
  r.reference = sup_of(rho, residual.margin);
  for (const PolySymbol& a : factors) r.reference *= sup_of(sample(a, rho.grid), residual.margin);
  r.residual = std::move(residual);
  return r;
}

}  // namespace

BoppOperator moyal_rhs_operator(const PolySymbol& h) {
  return cplx(-I) * (left_star_operator(h) - right_star_operator(h));
}

SampledSymbol moyal_rhs(const PolySymbol& h, const DerivativeSource& r) { return moyal_rhs_operator(h).apply(r); }

PolySymbol moyal_rhs(const PolySymbol& h, const PolySymbol& r) { return moyal_rhs_operator(h).apply(r); }

StationaryReport stationary_ansatz_check(const LocalHamiltonian& h, double e1, double e2, const RhoPiece& rho) {
  const BoppOperator id = BoppOperator::identity();
  const BoppOperator sine = cplx(2.0 * I) * moyal_bracket_operator(h.h) - cplx(e1 - e2) * id;
  const BoppOperator cosine = cplx(2.0) * sym_bracket_operator(h.h) - cplx(e1 + e2) * id;
  const PolySymbol centred = h.h - PolySymbol(cplx(0.5 * (e1 + e2)));
  const SampledSymbol values = rho.source->values();
  StationaryReport out;
  out.sine = report("2i[H,rho] - (E1-E2) rho", rho.entry, sine.apply(*rho.source), values, {centred});
  out.cosine = report("2(H,rho) - (E1+E2) rho", rho.entry, cosine.apply(*rho.source), values, {centred});
  for (ResidualReport* r : {&out.sine, &out.cosine}) {
    const Mask ex = rho.excluded.size() ? rho.excluded : empty_mask(values.grid);
    const Norms n = norms(r->residual, ex);
    r->sup = n.sup;
    r->l2 = n.l2;
    r->excluded = ex;
    r->exclusions = rho.exclusions;
  }
  return out;
}

ComplexifiedEvolution complexified_evolution(const OffDiagonalPair& pair, const PolySymbol& h, ComplexTime z,
                                             const PhaseGrid& g, const DerivativeBackend& backend,
                                             const TransformOptions& options) {
  ComplexifiedEvolution out;
  out.z = z;
  out.phase = ansatz_phase(pair.e1, pair.e2, z);
  const cplx zz = z.z();
  out.r = cross_wigner(scaled(pair.psi1, std::exp(-I * pair.e1 * zz)), scaled(pair.psi2, std::exp(-I * pair.e2 * zz)),
                       g, options);
  const SampledSource src(out.r.rho, backend);
  const PolySymbol a1 = h - PolySymbol(cplx(pair.e1)), a2 = h - PolySymbol(cplx(pair.e2));
  const BoppOperator id = BoppOperator::identity(), left = left_star_operator(h), right = right_star_operator(h);
  const std::string entry = "complexified pair";
  out.left = report("H*R - E1 R", entry, (left - cplx(pair.e1) * id).apply(src), out.r.rho, {a1});
  out.right = report("R*H - E2 R", entry, (right - cplx(pair.e2) * id).apply(src), out.r.rho, {a2});
  out.off_diagonal =
      report("(H-E1)*R*(H-E2)", entry, off_diagonal_operator(h, pair.e1, pair.e2).apply(src), out.r.rho, {a1, a2});

  // i d_z and -i d_zbar of the prefactor exp(-i(E1 z - E2 zbar)).
  const cplx dz = I * (-I * pair.e1), dzbar = -I * (I * pair.e2);
  const BoppOperator dynamical = dz * dzbar * id - dz * right - dzbar * left + right * left;
  out.dynamical = report("(i d_z - H)*R*(-i d_zbar - H)", entry, dynamical.apply(src), out.r.rho, {a1, a2});

  const cplx dt = -I * (pair.e1 - pair.e2);
  out.rhs = report("(1/i)(H*R - R*H) - dR/dt", entry, moyal_rhs(h, src) - dt * out.r.rho, out.r.rho, {a1});
  return out;
}

std::vector<SampledSymbol> euler_evolve(const PolySymbol& h, SampledSymbol r0, double dt, int steps,
                                        const DerivativeBackend& backend) {
  std::vector<SampledSymbol> out{r0};
  const BoppOperator op = moyal_rhs_operator(h);
  for (int n = 0; n < steps; ++n) {
    const SampledSource src(out.back(), backend);
    SampledSymbol next = out.back() + cplx(dt) * op.apply(src);
    next.real = false;
    out.push_back(std::move(next));
  }
  return out;
}

TimeSample time_sample(const ComplexifiedEvolution& e) {
  return {e.z, e.left.normalized_sup(), e.right.normalized_sup(), e.off_diagonal.normalized_sup(),
          e.dynamical.normalized_sup(), e.rhs.normalized_sup()};
}

void write_time_series(std::ostream& out, const std::vector<TimeSample>& samples) {
  out << "t,s,left,right,off_diagonal,dynamical,rhs\n";
  char buf[256];
  for (const TimeSample& s : samples) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.z.t, s.z.s, s.left, s.right,
                  s.off_diagonal, s.dynamical, s.rhs);
    out << buf;
  }
}

nlohmann::json ComplexifiedEvolution::to_json() const {
  return {{"z", {{"t", z.t}, {"s", z.s}}},
          {"phase", {phase.real(), phase.imag()}},
          {"left", left.to_json()},
          {"right", right.to_json()},
          {"off_diagonal", off_diagonal.to_json()},
          {"dynamical", dynamical.to_json()},
          {"rhs", rhs.to_json()}};
}

}  // namespace moyal
