#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "moyal/symbol.hpp"

namespace moyal {

nlohmann::json to_json(const PhaseGrid& g);
PhaseGrid grid_from_json(const nlohmann::json& j);

// CSV columns x, p, re, im with 17 significant digits.
void write_csv(std::ostream& out, const SampledSymbol& f);
SampledSymbol read_csv(std::istream& in, const PhaseGrid& g);

// <stem>.csv plus <stem>.json holding grid, parameters, provenance and margin cells.
void save_symbol(const std::string& stem, const SampledSymbol& f, const nlohmann::json& params,
                 const std::string& provenance);
struct LoadedSymbol {
  SampledSymbol symbol;
  nlohmann::json params;
  std::string provenance;
};
LoadedSymbol load_symbol(const std::string& stem);

}  // namespace moyal
