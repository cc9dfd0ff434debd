// Dedicated acceptance runner: one line per criterion, nonzero exit on any
// failure.  The same suite backs the CLI's `verify` subcommand.

#include <cstdio>

#include "funcspace/acceptance.hpp"

int main() {
  int failures = 0;
  for (const auto& r : funcspace::run_acceptance()) {
    std::puts(funcspace::format_line(r).c_str());
    if (!r.passed) ++failures;
  }
  if (failures) std::printf("%d of 9 criteria failed\n", failures);
  else std::puts("all 9 criteria passed");
  return failures ? 1 : 0;
}
