#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "moyal/bopp.hpp"
#include "moyal/catalog.hpp"

namespace moyal {

struct LocalHamiltonian {
  PolySymbol h;
  Region region = Region::all;
};

// One piece of rho with everything the residual norms need.
struct RhoPiece {
  std::string entry;
  std::shared_ptr<const DerivativeSource> source;
  Region region = Region::all;
  Mask excluded;                    // momentum bands and cells off the region
  std::vector<std::string> exclusions;
};

// Exact x-derivatives from the closed form; p-derivatives (if any) from `p_fallback`.
RhoPiece piece_of(const ClosedFormSymbol& s, const PhaseGrid& g, std::optional<DerivativeBackend> p_fallback = {},
                  double band = 1e-3);
RhoPiece piece_of(std::string entry, const SampledSymbol& rho, const DerivativeBackend& backend,
                  Region region = Region::all);
RhoPiece piece_of(std::string entry, std::shared_ptr<const DerivativeSource> source, Region region = Region::all);
LocalHamiltonian hamiltonian_of(const ClosedFormSymbol& s);

struct ConvergencePoint {
  double h = 0;
  double norm = 0;
};

struct ResidualReport {
  std::string entry;
  std::string equation;
  SampledSymbol residual;
  double sup = 0;
  double l2 = 0;
  double reference = 0;  // sup|H - E|^k sup|rho| over the same cells
  Mask excluded;
  std::vector<std::string> exclusions;
  std::vector<ConvergencePoint> convergence;
  double order = 0;  // measured from the last two convergence points

  double normalized_sup() const { return reference > 0 ? sup / reference : sup; }
  nlohmann::json to_json() const;
};

struct EigenReport {
  ResidualReport left, right;
  // For real rho: [H, rho] and (H, rho) - E rho.
  std::optional<ResidualReport> bracket_im, bracket_re;
};

// The operators themselves, rho -> residual.
BoppOperator sse_operator(const PolySymbol& h, double e);
BoppOperator off_diagonal_operator(const PolySymbol& h, double e1, double e2);
BoppOperator conjugate_form_operator(const PolySymbol& h, double e);
BoppOperator conjugate_form_right_operator(const PolySymbol& h, double e);
// [(p^2 - E)^2 + 2 (p^2 + E) d_(2x)^2 + d_(2x)^4] with d_(2x) = d_x / 2; E = k^2 or -kappa^2.
BoppOperator quartic_free_operator(double e);
BoppOperator harmonic_sse_operator(double e);
// The expanded V-dependent form, each line built from bracket operators.
BoppOperator long_form_operator(const PolySymbol& v, double e);

EigenReport eigen_residual(const LocalHamiltonian& h, double e, const RhoPiece& rho);
ResidualReport sse_residual(const LocalHamiltonian& h, double e, const RhoPiece& rho);
ResidualReport quartic_free_residual(double e, const RhoPiece& rho);
ResidualReport harmonic_sse_residual(double e, const RhoPiece& rho);
// [H, rho] (free: -p d_x rho; harmonic: (x d_p - p d_x) rho), normalized by sup|H - E| sup|rho|.
ResidualReport imaginary_part_checks(const LocalHamiltonian& h, double e, const RhoPiece& rho);
// H = p^2 + V; rho real.
ResidualReport long_form_residual(const PolySymbol& v, double e, const RhoPiece& rho);
ResidualReport conjugate_form_residual(const LocalHamiltonian& h, double e, const RhoPiece& rho);
ResidualReport conjugate_form_right_residual(const LocalHamiltonian& h, double e, const RhoPiece& rho);
ResidualReport off_diagonal_sse_residual(const LocalHamiltonian& h, double e1, double e2, const RhoPiece& rho);

// Runs `run` on coarse, refine(coarse, 2), refine(coarse, 4), ...; norms are taken over the
// same physical box (the coarse window shrunk by `trim` of its extent on each side).
ResidualReport converge(const std::function<ResidualReport(const PhaseGrid&)>& run, const PhaseGrid& coarse,
                        int levels = 3, double trim = 0.1);

// Reports whose headline number differs between a and b, as max |a - b| / reference.
double residual_difference(const ResidualReport& a, const ResidualReport& b);

}  // namespace moyal
