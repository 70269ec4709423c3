#include <cstdio>
#include <cstdlib>
#include <string>

#include "moyal/acceptance.hpp"

int main(int argc, char** argv) {
  moyal::AcceptanceOptions options;
  if (argc > 1) options.seed = std::strtoull(argv[1], nullptr, 10);
  int failed = 0;
  for (int id = 1; id <= moyal::acceptance_count; ++id) {
    const moyal::CriterionResult r = moyal::run_criterion(id, options);
    std::printf("%s\n", moyal::summary_line(r).c_str());
    std::fflush(stdout);
    if (!r.pass()) {
      ++failed;
      for (const moyal::Check& c : r.checks)
        if (!c.pass) std::printf("  failing: %s = %.6g\n", c.name.c_str(), c.value);
    }
  }
  std::printf("%d of %d criteria passed\n", moyal::acceptance_count - failed, moyal::acceptance_count);
  return failed == 0 ? 0 : 1;
}
