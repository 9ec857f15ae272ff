// Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero when
// any non-skipped criterion fails.

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <string>

#include "wrc/verify.hpp"

int main(int argc, char** argv) {
  const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 2019;
  int failures = 0;
  for (const auto& r : wrc::verify::run_all(seed)) {
    const char* verdict = r.skipped ? "SKIP" : (r.passed ? "PASS" : "FAIL");
    std::cout << verdict << " criterion " << r.id << " - " << r.name << " (" << std::fixed << std::setprecision(2)
              << r.seconds << " s): " << r.detail << std::endl;
    failures += (!r.skipped && !r.passed) ? 1 : 0;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
  return failures == 0 ? 0 : 1;
}
