#include <doctest.h>

#include <cmath>

#include "wrc/verify.hpp"

using namespace wrc;

TEST_CASE("verdicts are stable across seeds") {
  for (std::uint64_t seed : {1U, 2U, 3U}) {
    for (const auto& r : verify::run_all(seed)) {
      INFO("seed " << seed << " check " << r.id << ": " << r.detail);
      CHECK((r.passed || r.skipped));
    }
  }
}

TEST_CASE("concentration battery rejects an over-tight slack") {
  // sqrt(6n)/k shrinks far faster than the true deviation.
  const auto bad = verify::concentration(2019, [](std::size_t n, std::size_t k) {
    return std::sqrt(6.0 * static_cast<double>(n)) / static_cast<double>(k);
  });
  CHECK_FALSE(bad.passed);
  const auto none = verify::concentration(2019, [](std::size_t, std::size_t) { return 0.0; });
  CHECK_FALSE(none.passed);
}

TEST_CASE("dropping the 1/k only widens the slack") {
  const auto wide = verify::concentration(2019, [](std::size_t n, std::size_t) {
    return std::sqrt(6.0 * static_cast<double>(n));
  });
  CHECK(wide.passed);
}
