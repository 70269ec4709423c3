#include "moyal/verifier.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "moyal/star.hpp"

namespace moyal {

namespace {

PolySymbol shifted(const PolySymbol& h, double e) { return h - PolySymbol(cplx(e)); }

void check_piece(const LocalHamiltonian& h, const RhoPiece& rho) {
  if (!rho.source) throw std::invalid_argument("rho piece has no data");
  if (h.region != Region::all && rho.region != Region::all && h.region != rho.region)
    throw std::invalid_argument("piece mismatch: Hamiltonian on " + to_string(h.region) + ", rho on " +
                                to_string(rho.region));
}

Mask excluded_of(const RhoPiece& rho) {
  const PhaseGrid& g = rho.source->grid();
  if (rho.excluded.rows() == g.nx && rho.excluded.cols() == g.np) return rho.excluded;
  return empty_mask(g);
}

double masked_sup(const Field& f, const Mask& skip) {
  double m = 0;
  for (Index j = 0; j < f.cols(); ++j)
    for (Index i = 0; i < f.rows(); ++i)
      if (!skip(i, j)) m = std::max(m, std::abs(f(i, j)));
  return m;
}

ResidualReport run(const BoppOperator& op, std::string equation, const RhoPiece& rho,
                   const std::vector<PolySymbol>& scale_factors) {
  const PhaseGrid& g = rho.source->grid();
  ResidualReport r;
  r.entry = rho.entry;
  r.equation = std::move(equation);
  r.residual = op.apply(*rho.source);
  r.excluded = excluded_of(rho);
  r.exclusions = rho.exclusions;
  const Norms n = norms(r.residual, r.excluded);
  r.sup = n.sup;
  r.l2 = n.l2;
  const Mask skip = r.excluded || r.residual.margin;
  double ref = masked_sup(rho.source->values().values, skip);
  for (const PolySymbol& a : scale_factors) ref *= masked_sup(sample(a, g).values, skip);
  r.reference = ref;
  return r;
}

std::string band_note(const std::vector<double>& poles, double band) {
  std::ostringstream s;
  s << "|p - q| < " << band << " for q in {";
  for (size_t n = 0; n < poles.size(); ++n) s << (n ? ", " : "") << poles[n];
  s << "}";
  return s.str();
}

}  // namespace

nlohmann::json ResidualReport::to_json() const {
  nlohmann::json conv = nlohmann::json::array();
  for (const auto& c : convergence) conv.push_back({{"h", c.h}, {"norm", c.norm}});
  nlohmann::json j = {{"entry", entry},       {"equation", equation}, {"normalized_sup", normalized_sup()},
                      {"sup", sup},           {"l2", l2},             {"reference", reference},
                      {"exclusions", exclusions}, {"convergence", conv}};
  if (!convergence.empty()) j["order"] = order;
  return j;
}

RhoPiece piece_of(const ClosedFormSymbol& s, const PhaseGrid& g, std::optional<DerivativeBackend> p_fallback,
                  double band) {
  RhoPiece r;
  r.entry = s.id;
  r.source = std::make_shared<TabulatedSource>(s.tabulate(g, std::move(p_fallback)));
  r.region = s.region;
  r.excluded = s.exclusion(g, band);
  if (!s.poles().empty()) r.exclusions.push_back(band_note(s.poles(), band));
  if (s.region != Region::all) r.exclusions.push_back("cells off " + to_string(s.region));
  return r;
}

RhoPiece piece_of(std::string entry, const SampledSymbol& rho, const DerivativeBackend& backend, Region region) {
  return piece_of(std::move(entry), std::make_shared<SampledSource>(rho, backend), region);
}

RhoPiece piece_of(std::string entry, std::shared_ptr<const DerivativeSource> source, Region region) {
  RhoPiece r;
  r.entry = std::move(entry);
  r.region = region;
  const PhaseGrid& g = source->grid();
  r.excluded = region == Region::negative   ? outside_x(g, -std::numeric_limits<double>::infinity(), 0)
               : region == Region::positive ? outside_x(g, 0, std::numeric_limits<double>::infinity())
                                            : empty_mask(g);
  if (region != Region::all) r.exclusions.push_back("cells off " + to_string(region));
  r.source = std::move(source);
  return r;
}

LocalHamiltonian hamiltonian_of(const ClosedFormSymbol& s) { return {s.hamiltonian, s.region}; }

BoppOperator sse_operator(const PolySymbol& h, double e) { return off_diagonal_operator(h, e, e); }

BoppOperator off_diagonal_operator(const PolySymbol& h, double e1, double e2) {
  return right_star_operator(shifted(h, e2)) * left_star_operator(shifted(h, e1));
}

BoppOperator conjugate_form_operator(const PolySymbol& h, double e) {
  const PolySymbol a = shifted(h, e);
  return left_star_operator(a, -1) * left_star_operator(a, 1);
}

BoppOperator conjugate_form_right_operator(const PolySymbol& h, double e) {
  const PolySymbol a = shifted(h, e);
  return right_star_operator(a, -1) * right_star_operator(a, 1);
}

BoppOperator quartic_free_operator(double e) {
  const PolySymbol p2 = PolySymbol::monomial(0, 2);
  const PolySymbol a = p2 - PolySymbol(cplx(e));
  BoppOperator op = BoppOperator::multiply(a * a);
  op.add_term(2, 0, cplx(0.5) * (p2 + PolySymbol(cplx(e))));
  op.add_term(4, 0, PolySymbol(1.0 / 16));
  return op;
}

BoppOperator harmonic_sse_operator(double e) {
  const PolySymbol x = PolySymbol::x(), p = PolySymbol::p();
  const PolySymbol r = x * x + p * p - PolySymbol(cplx(e));
  BoppOperator op = BoppOperator::multiply(r * r - PolySymbol(1.0));
  op.add_term(1, 0, cplx(-2) * x);
  op.add_term(0, 1, cplx(-2) * p);
  op.add_term(2, 0, cplx(-0.5) * r + p * p);
  op.add_term(0, 2, cplx(-0.5) * r + x * x);
  op.add_term(1, 1, cplx(-2) * x * p);
  op.add_term(4, 0, PolySymbol(1.0 / 16));
  op.add_term(2, 2, PolySymbol(2.0 / 16));
  op.add_term(0, 4, PolySymbol(1.0 / 16));
  return op;
}

BoppOperator long_form_operator(const PolySymbol& v, double e) {
  const PolySymbol p = PolySymbol::p(), p2 = p * p, E{cplx(e)};
  const BoppOperator re_v = sym_bracket_operator(v), im_v = moyal_bracket_operator(v);
  const BoppOperator dx2 = BoppOperator::derivative(2, 0);
  BoppOperator p_dx;
  p_dx.add_term(1, 0, p);

  BoppOperator quartic = BoppOperator::multiply(p2 * p2 - cplx(2 * e) * p2 + E * E);
  quartic.add_term(2, 0, cplx(0.5) * (p2 + E));
  quartic.add_term(4, 0, PolySymbol(1.0 / 16));

  const BoppOperator kinetic = BoppOperator::multiply(p2 - E) - cplx(0.25) * dx2;
  return quartic + BoppOperator::multiply(p2 - E) * re_v - p_dx * im_v - cplx(0.25) * dx2 * re_v - im_v * p_dx +
         im_v * im_v + re_v * re_v + re_v * kinetic;
}

EigenReport eigen_residual(const LocalHamiltonian& h, double e, const RhoPiece& rho) {
  check_piece(h, rho);
  const PolySymbol a = shifted(h.h, e);
  const BoppOperator shift = cplx(-e) * BoppOperator::identity();
  EigenReport out;
  out.left = run(left_star_operator(h.h) + shift, "H*rho - E rho", rho, {a});
  out.right = run(right_star_operator(h.h) + shift, "rho*H - E rho", rho, {a});
  if (rho.source->real()) {
    out.bracket_im = run(moyal_bracket_operator(h.h), "[H, rho]", rho, {a});
    out.bracket_re = run(sym_bracket_operator(h.h) + shift, "(H, rho) - E rho", rho, {a});
  }
  return out;
}

ResidualReport sse_residual(const LocalHamiltonian& h, double e, const RhoPiece& rho) {
  check_piece(h, rho);
  const PolySymbol a = shifted(h.h, e);
  return run(sse_operator(h.h, e), "(H-E)*rho*(H-E)", rho, {a, a});
}

ResidualReport quartic_free_residual(double e, const RhoPiece& rho) {
  const PolySymbol a = shifted(PolySymbol::monomial(0, 2), e);
  return run(quartic_free_operator(e), "free quartic", rho, {a, a});
}

ResidualReport harmonic_sse_residual(double e, const RhoPiece& rho) {
  const PolySymbol a = shifted(PolySymbol::monomial(2, 0) + PolySymbol::monomial(0, 2), e);
  return run(harmonic_sse_operator(e), "harmonic quartic", rho, {a, a});
}

ResidualReport imaginary_part_checks(const LocalHamiltonian& h, double e, const RhoPiece& rho) {
  check_piece(h, rho);
  if (!rho.source->real()) throw std::invalid_argument("imaginary-part diagnostic needs a real rho");
  return run(moyal_bracket_operator(h.h), "[H, rho]", rho, {shifted(h.h, e)});
}

ResidualReport long_form_residual(const PolySymbol& v, double e, const RhoPiece& rho) {
  if (!rho.source->real()) throw std::invalid_argument("long form needs a real rho");
  if (v.degree() > 3) throw std::invalid_argument("long form takes V of degree <= 3");
  const PolySymbol a = shifted(PolySymbol::monomial(0, 2) + v, e);
  return run(long_form_operator(v, e), "long form", rho, {a, a});
}

ResidualReport conjugate_form_residual(const LocalHamiltonian& h, double e, const RhoPiece& rho) {
  check_piece(h, rho);
  const PolySymbol a = shifted(h.h, e);
  return run(conjugate_form_operator(h.h, e), "(H-E) conj* ((H-E)*rho)", rho, {a, a});
}

ResidualReport conjugate_form_right_residual(const LocalHamiltonian& h, double e, const RhoPiece& rho) {
  check_piece(h, rho);
  const PolySymbol a = shifted(h.h, e);
  return run(conjugate_form_right_operator(h.h, e), "(rho*(H-E)) conj* (H-E)", rho, {a, a});
}

ResidualReport off_diagonal_sse_residual(const LocalHamiltonian& h, double e1, double e2, const RhoPiece& rho) {
  check_piece(h, rho);
  return run(off_diagonal_operator(h.h, e1, e2), "(H-E1)*rho*(H-E2)", rho, {shifted(h.h, e1), shifted(h.h, e2)});
}

ResidualReport converge(const std::function<ResidualReport(const PhaseGrid&)>& run_on, const PhaseGrid& coarse,
                        int levels, double trim) {
  if (levels < 2) throw std::invalid_argument("convergence needs at least two grids");
  const double tx = trim * (coarse.x_max - coarse.x_min), tp = trim * (coarse.p_max - coarse.p_min);
  ResidualReport last;
  std::vector<ConvergencePoint> points;
  for (int l = 0; l < levels; ++l) {
    const PhaseGrid g = refine(coarse, 1 << l);
    ResidualReport r = run_on(g);
    Mask box = r.excluded || outside_x(g, coarse.x_min + tx, coarse.x_max - tx);
    for (Index j = 0; j < g.np; ++j)
      if (g.p(j) < coarse.p_min + tp || g.p(j) > coarse.p_max - tp) box.col(j).setConstant(true);
    const Norms n = norms(r.residual, box);
    r.sup = n.sup;
    r.l2 = n.l2;
    points.push_back({g.dx, r.normalized_sup()});
    last = std::move(r);
  }
  last.convergence = points;
  const auto& a = points[points.size() - 2];
  const auto& b = points.back();
  last.order = std::log(a.norm / b.norm) / std::log(a.h / b.h);
  return last;
}

double residual_difference(const ResidualReport& a, const ResidualReport& b) {
  const Mask skip = a.excluded || b.excluded || a.residual.margin || b.residual.margin;
  return masked_sup(a.residual.values - b.residual.values, skip) / a.reference;
}

}  // namespace moyal
