#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "moyal/experiment.hpp"
#include "moyal/star.hpp"

namespace fs = std::filesystem;
using moyal::ConfigError;
using moyal::ExperimentConfig;
using nlohmann::json;

namespace {

constexpr const char* out_env = "MOYAL_OUT";

void run_pool(std::vector<std::function<void()>>& tasks, int jobs) {
  const int n =
      std::max(1, std::min<int>(jobs > 0 ? jobs : int(std::thread::hardware_concurrency()), int(tasks.size())));
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < n; ++w)
    pool.emplace_back([&] {
      for (size_t i; (i = next++) < tasks.size();) tasks[i]();
    });
  for (auto& t : pool) t.join();
}

json param_value(const std::string& s) {
  if (s == "inf") return s;
  size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size()) throw ConfigError("parameter value '" + s + "' is not a number");
  return v;
}

json grid_value(const std::string& s) {
  std::vector<double> v;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');) v.push_back(param_value(item).get<double>());
  if (v.size() != 6) throw ConfigError("--grid takes x_min,x_max,p_min,p_max,nx,np");
  for (int i : {4, 5})
    if (v[i] != std::floor(v[i])) throw ConfigError("grid sizes must be integers");
  return {{"x_min", v[0]}, {"x_max", v[1]}, {"p_min", v[2]}, {"p_max", v[3]}, {"nx", long(v[4])}, {"np", long(v[5])}};
}

struct Flags {
  std::string config, out, entry, backend, grid;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs, trials;
  std::optional<double> tol_scale;
  std::map<std::string, std::string> named;  // --k, --L, ...
  std::vector<std::string> params;           // key=value
  std::vector<std::string> times;            // t,s
};

void add_entry_options(CLI::App* sub, Flags& f) {
  sub->add_option("--entry", f.entry, "catalog entry id");
  for (const char* key : {"k", "L", "V0", "alpha", "beta", "gamma", "delta"})
    sub->add_option(std::string("--") + key, f.named[key], std::string("entry parameter ") + key);
  sub->add_option("--param", f.params, "entry parameter as key=value");
  sub->add_option("--grid", f.grid, "x_min,x_max,p_min,p_max,nx,np");
}

ExperimentConfig assemble(const Flags& f, const std::string& subcommand) {
  ExperimentConfig c;
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw ConfigError("cannot read config " + f.config);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    c = ExperimentConfig::from_json(j);
  }
  if (!subcommand.empty()) c.experiment = subcommand;
  if (!f.entry.empty()) c.entry = f.entry;
  for (const auto& [key, value] : f.named)
    if (!value.empty()) c.params[key] = param_value(value);
  for (const std::string& kv : f.params) {
    const size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--param expects key=value, got '" + kv + "'");
    c.params[kv.substr(0, eq)] = param_value(kv.substr(eq + 1));
  }
  if (!f.grid.empty()) c.grid = grid_value(f.grid);
  if (!f.backend.empty()) c.backend = f.backend;
  if (!f.times.empty()) {
    c.times.clear();
    for (const std::string& z : f.times) {
      const size_t comma = z.find(',');
      if (comma == std::string::npos) throw ConfigError("--z expects t,s");
      c.times.emplace_back(param_value(z.substr(0, comma)).get<double>(), param_value(z.substr(comma + 1)).get<double>());
    }
  }
  if (f.seed) c.seed = *f.seed;
  if (f.jobs) c.jobs = *f.jobs;
  if (f.trials) c.trials = *f.trials;
  if (f.tol_scale) c.tol_scale = *f.tol_scale;
  if (!f.out.empty())
    c.out = f.out;
  else if (c.out.empty())
    c.out = std::getenv(out_env) ? std::getenv(out_env) : "moyal_out";
  return c;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

int main(int argc, char** argv) {
  try {
    moyal::check_star_sign_convention();
  } catch (const std::logic_error& e) {
    std::cerr << "star sign self-test failed: " << e.what() << "\n";
    return 1;
  }

  CLI::App app{"Phase-space star-product checks for contact interactions"};
  app.set_help_all_flag("--help-all");
  Flags f;
  app.add_option("--config", f.config, "JSON experiment config")->check(CLI::ExistingFile);
  app.add_option("--out", f.out, std::string("output directory (default $") + out_env + " or ./moyal_out)");
  app.add_option("--seed", f.seed, "seed for the random suites (default 7)");
  app.add_option("--jobs", f.jobs, "worker threads for `all` (default: logical cores)");
  app.add_option("--tol-scale", f.tol_scale, "multiplies upper tolerances, divides lower ones");

  CLI::App* catalog = app.add_subcommand("catalog", "list entries, or sample one with --entry");
  add_entry_options(catalog, f);
  CLI::App* residual = app.add_subcommand("residual", "product and eigen equation residuals of an entry");
  add_entry_options(residual, f);
  residual->add_option("--backend", f.backend, "analytic, fd2, fd4, fd6, spectral or spectral:<w>");
  CLI::App* identities = app.add_subcommand("identities", "associativity identities on random polynomials");
  identities->add_option("--trials", f.trials, "number of random triples");
  CLI::App* transform = app.add_subcommand("transform", "numerical transform against the closed form");
  add_entry_options(transform, f);
  CLI::App* match = app.add_subcommand("match", "coefficient fits and interface conditions");
  add_entry_options(match, f);
  CLI::App* evolve = app.add_subcommand("evolve", "complexified evolution of the oscillator pair");
  evolve->add_option("--z", f.times, "complex time t,s for z = t - is (repeatable)");
  evolve->add_option("--grid", f.grid, "x_min,x_max,p_min,p_max,nx,np");
  evolve->add_option("--backend", f.backend, "fd2, fd4, fd6, spectral or spectral:<w>");
  app.add_subcommand("all", "full acceptance suite");
  app.require_subcommand(0, 1);
  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  std::string subcommand;
  for (CLI::App* sub : app.get_subcommands()) subcommand = sub->get_name();
  if (subcommand.empty() && f.config.empty()) {
    std::cerr << app.help();
    return 2;
  }

  ExperimentConfig config;
  moyal::ExperimentOutcome outcome;
  try {
    config = assemble(f, subcommand);
    config.validate();
    if (config.experiment == "all") std::cout << "seed " << config.seed << "\n" << std::flush;
    outcome = moyal::run_experiment(config, run_pool);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return 1;
  }

  std::string name = config.experiment;
  if (!config.entry.empty()) name += "_" + config.entry;
  try {
    fs::create_directories(config.out);
    write_file(fs::path(config.out) / (name + ".json"), moyal::dump_fixed(outcome.report) + "\n");
    for (const moyal::Artifact& a : outcome.artifacts) write_file(fs::path(config.out) / a.name, a.content);
  } catch (const std::exception& e) {
    std::cerr << "cannot write artifacts: " << e.what() << "\n";
    return 1;
  }

  for (const std::string& line : outcome.log) std::cout << line << "\n";
  std::cout << name << ": " << (outcome.pass ? "PASS" : "FAIL") << " (" << (fs::path(config.out) / (name + ".json")).string()
            << ")\n";
  for (const std::string& failure : outcome.failures) std::cerr << "failed: " << failure << "\n";
  return outcome.pass ? 0 : 1;
}
