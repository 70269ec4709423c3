#pragma once

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "moyal/jet.hpp"
#include "moyal/poly_symbol.hpp"
#include "moyal/source.hpp"
#include "moyal/wigner.hpp"

namespace moyal {

enum class Region { negative, positive, all };

std::string to_string(Region r);

// A closed-form pi * rho with exact x-derivatives to order 4.
struct ClosedFormSymbol {
  using XJet = Jet<cplx, 4, 0>;
  using MixedJet = Jet<cplx, 4, 4>;

  std::string id;
  nlohmann::json params;
  Region region = Region::all;
  double energy = 0;
  PolySymbol hamiltonian;  // local H on the region
  bool real = true;
  bool zero_outside = false;  // vanishes identically off its region (walls)
  std::vector<double> removable_poles;  // momenta evaluated by series or interpolation
  std::vector<double> genuine_poles;    // momenta with nonzero residue
  std::optional<WaveFunction> wave;     // state whose pi * rho this is, up to transform_scale
  double transform_scale = 1;           // entry = transform_scale * pi * rho[wave]

  std::function<XJet(double x, double p)> x_jet;
  std::function<MixedJet(double x, double p)> mixed_jet;  // set for entries smooth in p

  bool in_region(double x) const;
  cplx eval(double x, double p) const;
  cplx d_x(int n, double x, double p) const;

  SampledSymbol sample(const PhaseGrid& g) const;
  // Exact x-derivatives to order 4 (and mixed up to (4, 4) when available); cells
  // on genuine poles are zeroed and flagged in the margin.
  TabulatedSource tabulate(const PhaseGrid& g, std::optional<DerivativeBackend> p_fallback = std::nullopt) const;
  // |p - q| < band for every listed pole q, and cells off the region.
  Mask exclusion(const PhaseGrid& g, double band = 1e-3) const;
  std::vector<double> poles() const;
};

struct PointInteractionParams {
  double alpha, beta, gamma, delta;
  // Throws std::invalid_argument unless |alpha gamma - beta delta - 1| <= 1e-12.
  PointInteractionParams(double alpha, double beta, double gamma, double delta);
  nlohmann::json to_json() const;
};

// gamma = (1 + beta delta) / alpha with alpha, beta, delta uniform in [-2, 2], |alpha| >= 0.2.
PointInteractionParams random_point_params(std::mt19937_64& rng);
// Redraws until a bound state exists.
PointInteractionParams random_bound_params(std::mt19937_64& rng);

extern const double neumann;  // L = infinity

// kL = cot(delta_k / 2), delta_k in (0, 2pi); L = neumann gives 0.
double robin_phase(double k, double L);

ClosedFormSymbol robin_scatter(double k, double L);
// Four-term form of the same symbol, for term-wise comparison.
ClosedFormSymbol robin_scatter_four_term(double k, double L);
ClosedFormSymbol robin_bound(double L);

struct Scattering {
  cplx R, T, D;
};
Scattering point_amplitudes(const PointInteractionParams& q, double k);
// Smallest positive root of beta + delta kappa^2 + kappa (alpha + gamma) = 0;
// throws std::domain_error("no bound state") otherwise.
double point_bound_kappa(const PointInteractionParams& q);

using EntryPair = std::pair<ClosedFormSymbol, ClosedFormSymbol>;
EntryPair point_bound(const PointInteractionParams& q);
EntryPair point_scatter(const PointInteractionParams& q, double k);
// Compact x<0 / x>0 forms for given amplitudes.
EntryPair point_scatter_forms(double k, cplx R, cplx T);

EntryPair jump_below(double k, double V0);
EntryPair jump_above(double k, double V0);
// Step forms for general amplitudes; l = sqrt(E - V0).
EntryPair jump_above_forms(double k, double l, cplx R, cplx T);

EntryPair match_free_sho();

// Registry for the command line: id, parameter schema, and a builder from JSON.
struct CatalogInfo {
  std::string id;
  nlohmann::json schema;
  std::function<std::vector<ClosedFormSymbol>(const nlohmann::json&)> build;
};
const std::vector<CatalogInfo>& catalog_registry();
const CatalogInfo& catalog_lookup(const std::string& id);
nlohmann::json catalog_listing();

}  // namespace moyal
