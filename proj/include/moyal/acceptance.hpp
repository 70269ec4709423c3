#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "moyal/catalog.hpp"
#include "moyal/wigner.hpp"

namespace moyal {

struct AcceptanceOptions {
  std::uint64_t seed = 7;
  double tol_scale = 1;  // multiplies every upper tolerance, divides every lower one
};

struct Check {
  std::string name;
  double value = 0;
  double threshold = 0;
  bool upper = true;  // value <= threshold passes; otherwise value >= threshold
  bool pass = false;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  double seconds = 0;
  std::string error;  // set when the run threw
  bool pass() const;
  const Check* worst() const;  // first failing check, or the tightest passing one
  // Timing is left out unless asked for, so reports are reproducible.
  nlohmann::json to_json(bool with_timing = false) const;
};

inline constexpr int acceptance_count = 10;
std::string criterion_title(int id);
CriterionResult run_criterion(int id, const AcceptanceOptions& options = {});

// One line: "criterion <id> PASS|FAIL <title>: <check> = <value> (<= or >=) <threshold> [<seconds> s]".
std::string summary_line(const CriterionResult& r);

// Least-squares scalar c with entry ~ c * transform over the points (momenta within
// 0.05 of a pole skipped); returns the sup misfit relative to sup|entry|.
double transform_misfit(const ClosedFormSymbol& s, const std::vector<double>& xs, const std::vector<double>& ps,
                        const TransformOptions& opts = {});

}  // namespace moyal
