#include "moyal/symbol_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace moyal {

nlohmann::json to_json(const PhaseGrid& g) {
  return {{"x_min", g.x_min}, {"x_max", g.x_max}, {"p_min", g.p_min},
          {"p_max", g.p_max}, {"nx", g.nx},       {"np", g.np}};
}

PhaseGrid grid_from_json(const nlohmann::json& j) {
  return make_grid(j.at("x_min").get<double>(), j.at("x_max").get<double>(), j.at("p_min").get<double>(),
                   j.at("p_max").get<double>(), j.at("nx").get<Index>(), j.at("np").get<Index>());
}

void write_csv(std::ostream& out, const SampledSymbol& f) {
  out << "x,p,re,im\n";
  char line[128];
  for (Index i = 0; i < f.grid.nx; ++i)
    for (Index j = 0; j < f.grid.np; ++j) {
      const cplx v = f.values(i, j);
      std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", f.grid.x(i), f.grid.p(j), v.real(), v.imag());
      out << line;
    }
}

SampledSymbol read_csv(std::istream& in, const PhaseGrid& g) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("x,p,re,im", 0) != 0) throw std::runtime_error("symbol CSV: missing header");
  Field v(g.nx, g.np);
  for (Index i = 0; i < g.nx; ++i)
    for (Index j = 0; j < g.np; ++j) {
      if (!std::getline(in, line)) throw std::runtime_error("symbol CSV: truncated");
      double x, p, re, im;
      if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &x, &p, &re, &im) != 4)
        throw std::runtime_error("symbol CSV: malformed row '" + line + "'");
      v(i, j) = cplx(re, im);
    }
  return SampledSymbol(g, std::move(v));
}

void save_symbol(const std::string& stem, const SampledSymbol& f, const nlohmann::json& params,
                 const std::string& provenance) {
  std::ofstream csv(stem + ".csv");
  if (!csv) throw std::runtime_error("cannot write " + stem + ".csv");
  write_csv(csv, f);
  nlohmann::json margin = nlohmann::json::array();
  for (Index i = 0; i < f.grid.nx; ++i)
    for (Index j = 0; j < f.grid.np; ++j)
      if (f.margin(i, j)) margin.push_back({i, j});
  nlohmann::json header = {{"grid", to_json(f.grid)}, {"params", params},  {"provenance", provenance},
                           {"real", f.real},          {"margin", margin}};
  std::ofstream js(stem + ".json");
  if (!js) throw std::runtime_error("cannot write " + stem + ".json");
  js << header.dump(2) << "\n";
}

LoadedSymbol load_symbol(const std::string& stem) {
  std::ifstream js(stem + ".json");
  if (!js) throw std::runtime_error("cannot read " + stem + ".json");
  const nlohmann::json header = nlohmann::json::parse(js);
  const PhaseGrid g = grid_from_json(header.at("grid"));
  std::ifstream csv(stem + ".csv");
  if (!csv) throw std::runtime_error("cannot read " + stem + ".csv");
  SampledSymbol f = read_csv(csv, g);
  for (const auto& cell : header.at("margin")) f.margin(cell.at(0).get<Index>(), cell.at(1).get<Index>()) = true;
  f.real = header.value("real", false);
  return {std::move(f), header.value("params", nlohmann::json::object()), header.value("provenance", "")};
}

}  // namespace moyal
