#include <doctest.h>

#include <cmath>

#include "moyal/experiment.hpp"

using namespace moyal;
using nlohmann::json;

namespace {

const Check* find(const ExperimentOutcome& o, const std::string& part) {
  for (const json& c : o.report["checks"])
    if (c["name"].get<std::string>().find(part) != std::string::npos) {
      static thread_local Check out;
      out = {c["name"], c["value"], c["threshold"], c["bound"] == "upper", c["pass"]};
      return &out;
    }
  return nullptr;
}

ExperimentConfig robin_residual() {
  ExperimentConfig c;
  c.experiment = "residual";
  c.entry = "robin_scatter";
  c.params = {{"k", 1.0}, {"L", 0.0}};
  return c;
}

}  // namespace

TEST_CASE("config round trip and strict keys") {
  ExperimentConfig c = robin_residual();
  c.grid = json{{"x_min", -2.0}, {"x_max", 0.0}, {"p_min", -2.0}, {"p_max", 2.0}, {"nx", 21}, {"np", 31}};
  c.tolerances["sse"] = 1e-9;
  c.times = {{0.25, -0.125}};
  c.seed = 123456789012345ull;
  const json j = c.to_json();
  CHECK(ExperimentConfig::from_json(j).to_json() == j);
  CHECK(ExperimentConfig::from_json(json::parse(dump_fixed(j))).to_json() == j);

  json extra = j;
  extra["gird"] = 1;
  CHECK_THROWS_AS(ExperimentConfig::from_json(extra), ConfigError);
  json bad_type = j;
  bad_type["seed"] = "seven";
  CHECK_THROWS_AS(ExperimentConfig::from_json(bad_type), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(json::array()), ConfigError);
}

TEST_CASE("config validation messages") {
  auto message = [](ExperimentConfig c) {
    try {
      c.validate();
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  ExperimentConfig c = robin_residual();
  c.grid = json{{"x_min", -2.0}, {"x_max", 0.0}, {"p_min", -2.0}, {"p_max", 2.0}, {"nx", 2}, {"np", 31}};
  CHECK(message(c).find("nx = 2") != std::string::npos);
  c.grid = json{{"x_min", -2.0}, {"x_max", -2.0}, {"p_min", -2.0}, {"p_max", 2.0}, {"nx", 21}, {"np", 31}};
  CHECK(message(c).find("degenerate x-extent") != std::string::npos);
  c.grid = json{{"x_min", 0.5}, {"x_max", 2.0}, {"p_min", -2.0}, {"p_max", 2.0}, {"nx", 21}, {"np", 31}};
  CHECK(message(c).find("does not meet") != std::string::npos);
  c.grid = json{{"x_min", -2.0}, {"x_max", 0.0}, {"p_min", -2.0}, {"p_max", 2.0}, {"nx", 21}, {"ny", 31}};
  CHECK(message(c).find("unknown grid key 'ny'") != std::string::npos);

  ExperimentConfig d = robin_residual();
  d.backend = "chebyshev";
  CHECK(message(d).find("backend") != std::string::npos);
  d = robin_residual();
  d.entry = "robin";
  CHECK(message(d).find("unknown catalog entry") != std::string::npos);
  d = robin_residual();
  d.params["q"] = 1;
  CHECK(message(d).find("unknown parameter 'q'") != std::string::npos);
  d = robin_residual();
  d.entry.clear();
  CHECK(message(d).find("needs an entry") != std::string::npos);
  d = robin_residual();
  d.experiment = "plot";
  CHECK(message(d).find("unknown experiment") != std::string::npos);
  d = robin_residual();
  d.tol_scale = 0;
  CHECK(!message(d).empty());
  CHECK(message(robin_residual()).empty());
}

TEST_CASE("residual example") {
  const ExperimentOutcome o = run_experiment(robin_residual());
  CHECK(o.pass);
  const Check* sse = find(o, "product equation");
  REQUIRE(sse);
  CHECK(sse->value <= 1e-10);
  const Check* eigen = find(o, "eigen equation");
  REQUIRE(eigen);
  CHECK(eigen->value >= 0.1);
  REQUIRE(o.artifacts.size() == 1);
  CHECK(o.artifacts[0].name == "residual_robin_scatter_left_sse.csv");
  CHECK(o.artifacts[0].content.rfind("x,p,re,im\n", 0) == 0);

  // Tolerances are overridable and scaled.
  ExperimentConfig strict = robin_residual();
  strict.tolerances["sse"] = 1e-40;
  const ExperimentOutcome f = run_experiment(strict);
  CHECK(!f.pass);
  REQUIRE(f.failures.size() == 1);
  CHECK(f.failures[0] == "robin_scatter_left product equation");
  ExperimentConfig loose = strict;
  loose.tol_scale = 1e35;
  CHECK(run_experiment(loose).pass);

  // Finite differences across the removable poles do not reach the analytic level.
  ExperimentConfig fd = robin_residual();
  fd.backend = "fd4";
  CHECK(!run_experiment(fd).pass);
}

TEST_CASE("identities example and determinism") {
  ExperimentConfig c;
  c.experiment = "identities";
  c.trials = 100;
  c.seed = 7;
  const ExperimentOutcome a = run_experiment(c), b = run_experiment(c);
  CHECK(a.pass);
  CHECK(find(a, "identity")->value <= 1e-12);
  CHECK(dump_fixed(a.report) == dump_fixed(b.report));
  c.seed = 8;
  CHECK(dump_fixed(run_experiment(c).report) != dump_fixed(a.report));
}

TEST_CASE("matching, transform and evolution experiments") {
  ExperimentConfig m;
  m.experiment = "match";
  m.entry = "match_free_sho";
  const ExperimentOutcome mo = run_experiment(m);
  CHECK(mo.pass);
  CHECK(find(mo, "C1 mismatch")->value <= 1e-6);
  CHECK(mo.report["interface"].contains("c0"));

  m.experiment = "transform";
  const ExperimentOutcome to = run_experiment(m);
  CHECK(to.pass);
  CHECK(to.artifacts.size() == 2);

  ExperimentConfig e;
  e.experiment = "evolve";
  const ExperimentOutcome eo = run_experiment(e);
  CHECK(eo.pass);
  CHECK(eo.report["runs"].size() == 3);
  CHECK(eo.artifacts.back().name == "evolve_series.csv");
  e.times = {{0, -10}};
  CHECK_THROWS_AS(run_experiment(e), std::overflow_error);
}

TEST_CASE("catalog listing") {
  ExperimentConfig c;
  c.experiment = "catalog";
  const ExperimentOutcome o = run_experiment(c);
  CHECK(o.pass);
  CHECK(o.report["listing"].size() == 7);
  CHECK(o.artifacts.empty());
  c.entry = "jump_above";
  c.params = {{"k", 2.0}, {"V0", 1.0}};
  const ExperimentOutcome s = run_experiment(c);
  CHECK(s.artifacts.size() == 2);
  CHECK(s.report["pieces"][0]["poles"].size() > 0);
}

TEST_CASE("fixed-precision JSON") {
  const json j = {{"a", 0.1}, {"b", {1, 2.5, nullptr}}, {"c", "x\"y"}, {"d", json::object()}, {"e", NAN}};
  CHECK(dump_fixed(j, 0) == R"({"a":0.10000000000000001,"b":[1,2.5,null],"c":"x\"y","d":{},"e":null})");
  CHECK(json::parse(dump_fixed(j))["a"].get<double>() == 0.1);
}
