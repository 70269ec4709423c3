#include "moyal/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "moyal/catalog.hpp"
#include "moyal/derivative.hpp"
#include "moyal/evolve.hpp"
#include "moyal/matcher.hpp"
#include "moyal/star.hpp"
#include "moyal/symbol_io.hpp"
#include "moyal/verifier.hpp"

namespace moyal {

namespace {

using nlohmann::json;

const char* const config_keys[] = {"experiment", "entry", "params", "grid",  "backend", "tolerances",
                                   "tol_scale",  "seed",  "trials", "jobs",  "times",   "out"};
const char* const grid_keys[] = {"x_min", "x_max", "p_min", "p_max", "nx", "np"};

template <class T>
T field(const json& j, const char* key, const T& fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

PhaseGrid grid_of(const json& g) {
  if (!g.is_object()) throw ConfigError("grid must be an object");
  for (const auto& [key, _] : g.items())
    if (std::find(std::begin(grid_keys), std::end(grid_keys), key) == std::end(grid_keys))
      throw ConfigError("unknown grid key '" + key + "'");
  for (const char* k : grid_keys)
    if (!g.contains(k) || !g.at(k).is_number()) throw ConfigError(std::string("grid needs numeric '") + k + "'");
  try {
    return grid_from_json(g);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
}

std::optional<DerivativeBackend> backend_of(const std::string& spec) {
  if (spec == "analytic") return std::nullopt;
  try {
    return parse_backend(spec);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("backend: ") + e.what());
  }
}

std::vector<ClosedFormSymbol> entries_of(const ExperimentConfig& c) {
  try {
    return catalog_lookup(c.entry).build(c.params);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(c.entry + ": " + e.what());
  } catch (const std::domain_error& e) {
    throw ConfigError(c.entry + ": " + e.what());
  }
}

class Checks {
 public:
  explicit Checks(const ExperimentConfig& c) : c_(c) {}
  void at_most(const std::string& key, std::string name, double value, double tol) {
    tol = lookup(key, tol) * c_.tol_scale;
    add({std::move(name), value, tol, true, std::isfinite(value) && value <= tol});
  }
  void at_least(const std::string& key, std::string name, double value, double tol) {
    tol = lookup(key, tol) / c_.tol_scale;
    add({std::move(name), value, tol, false, std::isfinite(value) && value >= tol});
  }
  void add(Check c) { checks_.push_back(std::move(c)); }
  const std::vector<Check>& all() const { return checks_; }
  json to_json() const {
    json out = json::array();
    for (const Check& c : checks_)
      out.push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold},
                     {"bound", c.upper ? "upper" : "lower"}, {"pass", c.pass}});
    return out;
  }

 private:
  double lookup(const std::string& key, double fallback) const {
    const auto it = c_.tolerances.find(key);
    return it == c_.tolerances.end() ? fallback : it->second;
  }
  const ExperimentConfig& c_;
  std::vector<Check> checks_;
};

std::string csv_of(const SampledSymbol& f) {
  std::ostringstream out;
  write_csv(out, f);
  return out.str();
}

std::vector<double> span(double lo, double hi, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(lo + (hi - lo) * i / (n - 1));
  return v;
}

PhaseGrid base_grid(const ExperimentConfig& c, const PhaseGrid& fallback) {
  return c.grid ? grid_of(*c.grid) : fallback;
}

// |x| <= 3 and |p| <= 2 sqrt(max(|E|, 1/4)): the momentum window scales with the entry so
// that sup|H - E| over it stays comparable to the field's own scale.
PhaseGrid entry_grid(const ExperimentConfig& c, const std::vector<ClosedFormSymbol>& entries) {
  if (c.grid) return grid_of(*c.grid);
  const double pm = 2 * std::sqrt(std::max(std::abs(entries.front().energy), 0.25));
  return make_grid(-3, 3, -pm, pm, 61, 61);
}

// The part of g inside the entry's region, on the same spacing.
PhaseGrid piece_grid(const PhaseGrid& g, const ClosedFormSymbol& s) {
  if (s.region == Region::all) return g;
  const double lo = s.region == Region::negative ? g.x_min : std::max(g.x_min, 0.0);
  const double hi = s.region == Region::negative ? std::min(g.x_max, 0.0) : g.x_max;
  if (hi <= lo) throw ConfigError("grid does not meet the " + to_string(s.region) + " region of " + s.id);
  const Index nx = std::max<Index>(8, Index(std::lround((hi - lo) / g.dx)) + 1);
  return make_grid(lo, hi, g.p_min, g.p_max, nx, g.np);
}


std::string stem(const ClosedFormSymbol& s) {
  return s.id + (s.region == Region::negative ? "_left" : s.region == Region::positive ? "_right" : "_whole");
}

RhoPiece piece(const ClosedFormSymbol& s, const PhaseGrid& g, const std::optional<DerivativeBackend>& backend) {
  if (!backend) return piece_of(s, g);
  return piece_of(s.id, s.sample(g), *backend, s.region);
}

// ---- subcommands

void catalog(const ExperimentConfig& c, Checks&, ExperimentOutcome& out) {
  out.report["listing"] = catalog_listing();
  if (c.entry.empty()) return;
  const std::vector<ClosedFormSymbol> entries = entries_of(c);
  const PhaseGrid g = entry_grid(c, entries);
  json pieces = json::array();
  for (const ClosedFormSymbol& s : entries) {
    const PhaseGrid pg = piece_grid(g, s);
    pieces.push_back({{"id", s.id}, {"region", to_string(s.region)}, {"energy", s.energy}, {"real", s.real},
                      {"params", s.params}, {"poles", s.poles()}, {"grid", moyal::to_json(pg)}});
    out.artifacts.push_back({"catalog_" + stem(s) + ".csv", csv_of(s.sample(pg))});
  }
  out.report["pieces"] = pieces;
}

void residual(const ExperimentConfig& c, Checks& checks, ExperimentOutcome& out) {
  const std::vector<ClosedFormSymbol> entries = entries_of(c);
  const PhaseGrid g = entry_grid(c, entries);
  const auto backend = backend_of(c.backend);
  json pieces = json::array();
  for (const ClosedFormSymbol& s : entries) {
    const RhoPiece rho = piece(s, piece_grid(g, s), backend);
    const LocalHamiltonian h = hamiltonian_of(s);
    const ResidualReport sse = sse_residual(h, s.energy, rho);
    const EigenReport e = eigen_residual(h, s.energy, rho);
    const double eigen = std::max(e.left.normalized_sup(), e.right.normalized_sup());
    checks.at_most("sse", stem(s) + " product equation", sse.normalized_sup(), 1e-10);
    checks.at_least("eigen", stem(s) + " eigen equation", eigen, 1e-2);
    json p = {{"region", to_string(s.region)}, {"sse", sse.to_json()}, {"eigen_left", e.left.to_json()},
              {"eigen_right", e.right.to_json()}};
    if (e.bracket_im) p["bracket_im"] = e.bracket_im->to_json();
    if (e.bracket_re) p["bracket_re"] = e.bracket_re->to_json();
    pieces.push_back(std::move(p));
    out.artifacts.push_back({"residual_" + stem(s) + "_sse.csv", csv_of(sse.residual)});
  }
  out.report["pieces"] = pieces;
}

void identities(const ExperimentConfig& c, Checks& checks, ExperimentOutcome& out) {
  if (c.trials < 1) throw ConfigError("trials must be positive");
  std::mt19937_64 rng(c.seed);
  IdentityReport worst;
  double rel = 0;
  for (int t = 0; t < c.trials; ++t) {
    const PolySymbol f = random_poly(4, rng), g = random_poly(4, rng), h = random_poly(4, rng);
    const IdentityReport r = check_associativity_identities(f, g, h);
    worst.jacobi = std::max(worst.jacobi, r.jacobi / r.scale);
    worst.mixed = std::max(worst.mixed, r.mixed / r.scale);
    worst.cyclic = std::max(worst.cyclic, r.cyclic / r.scale);
    worst.associativity = std::max(worst.associativity, r.associativity / r.scale);
    rel = std::max(rel, r.worst_relative());
  }
  checks.at_most("identities", "worst relative identity residual", rel, 1e-12);
  out.report["trials"] = c.trials;
  out.report["relative"] = {{"jacobi", worst.jacobi},
                            {"mixed", worst.mixed},
                            {"cyclic", worst.cyclic},
                            {"associativity", worst.associativity}};
}

bool damped_entry(const ClosedFormSymbol& s) {
  return s.id == "robin_scatter" || s.id == "point_scatter" || s.id == "jump_above";
}

void transform(const ExperimentConfig& c, Checks& checks, ExperimentOutcome& out) {
  const std::vector<ClosedFormSymbol> entries = entries_of(c);
  const PhaseGrid g = entry_grid(c, entries);
  json pieces = json::array();
  for (const ClosedFormSymbol& s : entries) {
    if (!s.wave) continue;
    const PhaseGrid pg = piece_grid(g, s);
    TransformOptions opts;
    if (damped_entry(s)) opts.epsilon = 1e-4;
    const double wx = pg.x_max - pg.x_min, wp = pg.p_max - pg.p_min;
    const std::vector<double> xs = span(pg.x_min + 0.05 * wx, pg.x_max - 0.05 * wx, 6);
    const std::vector<double> ps = span(pg.p_min + 0.15 * wp, pg.p_max - 0.117 * wp, 9);
    const double misfit = transform_misfit(s, xs, ps, opts);
    checks.at_most("transform", stem(s) + " transform misfit", misfit, 1e-6);
    pieces.push_back({{"region", to_string(s.region)}, {"misfit", misfit}, {"x", xs}, {"p", ps}});
    TransformResult t = WignerTransform(opts).on(*s.wave, *s.wave, pg);
    for (Index j = 0; j < pg.np; ++j)
      for (Index i = 0; i < pg.nx; ++i)
        if (!s.in_region(pg.x(i))) t.rho.values(i, j) = 0;
    out.artifacts.push_back({"transform_" + stem(s) + ".csv", csv_of(t.rho)});
  }
  out.report["pieces"] = pieces;
}

std::vector<double> fit_momenta(const PhaseGrid& g, const ClosedFormSymbol& s, const FundamentalBasis& b) {
  std::vector<double> avoid = s.poles();
  for (double q : b.degenerate_momenta()) avoid.push_back(q);
  std::vector<double> ps;
  for (double p : span(g.p_min + 0.05, g.p_max - 0.05, 61)) {
    bool ok = true;
    for (double q : avoid) ok = ok && std::abs(p - q) > 0.05;
    if (ok) ps.push_back(p);
  }
  return ps;
}

void match(const ExperimentConfig& c, Checks& checks, ExperimentOutcome& out) {
  const std::vector<ClosedFormSymbol> entries = entries_of(c);
  const PhaseGrid g = entry_grid(c, entries);
  json pieces = json::array();
  for (const ClosedFormSymbol& s : entries) {
    const PolySymbol v = s.hamiltonian - PolySymbol::p() * PolySymbol::p();
    if (v.degree() != 0 || s.region == Region::all) continue;
    const double local = s.energy - v.coeff(0, 0).real();
    if (local == 0) continue;
    const PhaseGrid pg = piece_grid(g, s);
    const FundamentalBasis b = basis(local);
    const CoefficientFit fit = fit_coefficients(s, b, pg.x_min, pg.x_max, fit_momenta(pg, s, b));
    double worst = 0;
    int used = 0;
    for (size_t m = 0; m < fit.p.size(); ++m)
      if (!fit.ill_conditioned[m] && !fit.near_pole[m]) worst = std::max(worst, fit.residual[m]), ++used;
    checks.at_most("fit", stem(s) + " collocation residual", worst, 1e-8);
    pieces.push_back({{"region", to_string(s.region)}, {"basis", to_string(b.kind)}, {"local_energy", local},
                      {"momenta_used", used}, {"worst_residual", worst}});
    std::ostringstream csv;
    fit.write_csv(csv);
    out.artifacts.push_back({"match_" + stem(s) + ".csv", csv.str()});
  }
  out.report["pieces"] = pieces;

  std::vector<double> ps;
  for (double p : span(g.p_min + 0.05, g.p_max - 0.05, 61)) ps.push_back(p);
  if (entries.size() == 1 && entries[0].zero_outside) {
    const InterfaceReport r = assemble_and_match(side_of(entries[0]), zero_side(), 0, InterfaceCondition::wall, ps);
    checks.at_most("wall", stem(entries[0]) + " rho(0, p)", r.max_wall, 1e-10);
    out.report["interface"] = r.to_json();
  } else if (entries.size() == 2) {
    const InterfaceReport r = assemble_and_match(side_of(entries[0]), side_of(entries[1]), 0,
                                                 InterfaceCondition::c0 | InterfaceCondition::c1, ps);
    // Contact interactions with a jump in psi or psi' are not C1 at the origin; only smooth matches are held to it.
    if (c.entry == "match_free_sho") {
      checks.at_most("interface", c.entry + " C0 mismatch", r.max_c0, 1e-6);
      checks.at_most("interface", c.entry + " C1 mismatch", r.max_c1, 1e-6);
    }
    out.report["interface"] = r.to_json();
  }
}

void evolve(const ExperimentConfig& c, Checks& checks, ExperimentOutcome& out) {
  const OffDiagonalPair pair{WaveFunction::whole(Profile::gaussian()),
                             WaveFunction::whole(Profile::gaussian_moment(1)), 1.0, 3.0};
  const PhaseGrid g = base_grid(c, make_grid(-6, 6, -6, 6, 48, 48));
  const DerivativeBackend backend = backend_of(c.backend).value_or(Spectral{});
  const PolySymbol h = PolySymbol::x() * PolySymbol::x() + PolySymbol::p() * PolySymbol::p();
  std::vector<TimeSample> series;
  json runs = json::array();
  int n = 0;
  for (const auto& [t, s] : c.times) {
    const ComplexifiedEvolution e = complexified_evolution(pair, h, {t, s}, g, backend);
    char tag[64];
    std::snprintf(tag, sizeof tag, " at z = %.17g - %.17gi", t, s);
    checks.at_most("evolve", std::string("H*R - E1 R") + tag, e.left.normalized_sup(), 1e-8);
    checks.at_most("evolve", std::string("R*H - E2 R") + tag, e.right.normalized_sup(), 1e-8);
    checks.at_most("evolve", std::string("off-diagonal product") + tag, e.off_diagonal.normalized_sup(), 1e-8);
    checks.at_most("evolve", std::string("dynamical") + tag, e.dynamical.normalized_sup(), 1e-8);
    checks.at_most("evolve", std::string("time derivative") + tag, e.rhs.normalized_sup(), 1e-8);
    runs.push_back(e.to_json());
    series.push_back(time_sample(e));
    out.artifacts.push_back({"evolve_rho_" + std::to_string(n++) + ".csv", csv_of(e.r.rho)});
  }
  std::ostringstream csv;
  write_time_series(csv, series);
  out.artifacts.push_back({"evolve_series.csv", csv.str()});
  out.report["backend"] = describe(backend);
  out.report["runs"] = runs;
}

void acceptance(const ExperimentConfig& c, Checks& checks, ExperimentOutcome& out, const TaskRunner& runner) {
  const AcceptanceOptions opts{c.seed, c.tol_scale};
  std::vector<CriterionResult> results(acceptance_count);
  std::vector<std::function<void()>> tasks;
  for (int id = 1; id <= acceptance_count; ++id)
    tasks.push_back([&results, opts, id] { results[id - 1] = run_criterion(id, opts); });
  if (runner)
    runner(tasks, c.jobs);
  else
    for (auto& t : tasks) t();
  json criteria = json::array();
  for (const CriterionResult& r : results) {
    const Check* w = r.worst();
    Check summary{"criterion " + std::to_string(r.id) + " " + r.title, w ? w->value : NAN, w ? w->threshold : NAN,
                  w ? w->upper : true, r.pass()};
    if (!r.error.empty()) summary.name += " (" + r.error + ")";
    checks.add(summary);
    criteria.push_back(r.to_json());
    out.log.push_back(summary_line(r));
  }
  out.report["criteria"] = criteria;
}

void dump(std::string& s, const json& j, int indent, int depth) {
  const std::string pad = indent > 0 ? "\n" + std::string(size_t(indent) * (depth + 1), ' ') : "";
  const std::string close = indent > 0 ? "\n" + std::string(size_t(indent) * depth, ' ') : "";
  switch (j.type()) {
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        s += "null";
        break;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      s += buf;
      break;
    }
    case json::value_t::array: {
      if (j.empty()) {
        s += "[]";
        break;
      }
      s += "[";
      bool first = true;
      for (const json& e : j) {
        s += first ? "" : ",";
        s += pad;
        dump(s, e, indent, depth + 1);
        first = false;
      }
      s += close + "]";
      break;
    }
    case json::value_t::object: {
      if (j.empty()) {
        s += "{}";
        break;
      }
      s += "{";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        s += first ? "" : ",";
        s += pad + json(k).dump() + (indent > 0 ? ": " : ":");
        dump(s, v, indent, depth + 1);
        first = false;
      }
      s += close + "}";
      break;
    }
    default:
      s += j.dump();
  }
}

}  // namespace

json ExperimentConfig::to_json() const {
  json t = json::array();
  for (const auto& [a, b] : times) t.push_back({a, b});
  return {{"experiment", experiment},
          {"entry", entry},
          {"params", params},
          {"grid", grid ? *grid : json(nullptr)},
          {"backend", backend},
          {"tolerances", tolerances},
          {"tol_scale", tol_scale},
          {"seed", seed},
          {"trials", trials},
          {"jobs", jobs},
          {"times", t},
          {"out", out}};
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (std::find(std::begin(config_keys), std::end(config_keys), key) == std::end(config_keys))
      throw ConfigError("unknown config key '" + key + "'");
  ExperimentConfig c;
  c.experiment = field(j, "experiment", c.experiment);
  c.entry = field(j, "entry", c.entry);
  if (j.contains("params")) {
    if (!j.at("params").is_object()) throw ConfigError("params must be an object");
    c.params = j.at("params");
  }
  if (j.contains("grid") && !j.at("grid").is_null()) c.grid = j.at("grid");
  c.backend = field(j, "backend", c.backend);
  c.tolerances = field(j, "tolerances", c.tolerances);
  c.tol_scale = field(j, "tol_scale", c.tol_scale);
  c.seed = field(j, "seed", c.seed);
  c.trials = field(j, "trials", c.trials);
  c.jobs = field(j, "jobs", c.jobs);
  c.times = field(j, "times", c.times);
  c.out = field(j, "out", c.out);
  return c;
}

void ExperimentConfig::validate() const {
  if (std::find(experiment_names.begin(), experiment_names.end(), experiment) == experiment_names.end())
    throw ConfigError("unknown experiment '" + experiment + "'");
  if (grid) grid_of(*grid);
  backend_of(backend);
  if (!(tol_scale > 0)) throw ConfigError("tol_scale must be positive");
  if (trials < 1) throw ConfigError("trials must be positive");
  if (jobs < 0) throw ConfigError("jobs must be non-negative");
  const bool needs_entry = experiment == "residual" || experiment == "transform" || experiment == "match";
  if (needs_entry && entry.empty()) throw ConfigError(experiment + " needs an entry");
  if (!entry.empty()) {
    const std::vector<ClosedFormSymbol> entries = entries_of(*this);
    const PhaseGrid g = entry_grid(*this, entries);
    for (const ClosedFormSymbol& s : entries) piece_grid(g, s);
  }
}

ExperimentOutcome run_experiment(const ExperimentConfig& config, const TaskRunner& runner) {
  config.validate();
  ExperimentOutcome out;
  Checks checks(config);
  out.report = {{"experiment", config.experiment}, {"config", config.to_json()}};
  const std::string& e = config.experiment;
  if (e == "catalog")
    catalog(config, checks, out);
  else if (e == "residual")
    residual(config, checks, out);
  else if (e == "identities")
    identities(config, checks, out);
  else if (e == "transform")
    transform(config, checks, out);
  else if (e == "match")
    match(config, checks, out);
  else if (e == "evolve")
    evolve(config, checks, out);
  else
    acceptance(config, checks, out, runner);
  out.pass = true;
  for (const Check& c : checks.all()) {
    if (e != "all") {
      char buf[64];
      std::snprintf(buf, sizeof buf, " = %.3g %s %.3g ", c.value, c.upper ? "<=" : ">=", c.threshold);
      out.log.push_back(c.name + buf + (c.pass ? "PASS" : "FAIL"));
    }
    if (!c.pass) {
      out.pass = false;
      out.failures.push_back(c.name);
    }
  }
  out.report["checks"] = checks.to_json();
  out.report["pass"] = out.pass;
  return out;
}

std::string dump_fixed(const json& j, int indent) {
  std::string s;
  dump(s, j, indent, 0);
  return s;
}

}  // namespace moyal
