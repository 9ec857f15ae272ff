#include <doctest.h>

#include <bit>
#include <cmath>

#include "wrc/exact.hpp"

using namespace wrc;

namespace {

TabularWeightModel single_point(std::size_t n, std::uint64_t index) {
  std::vector<double> w(std::size_t{1} << n, 0.0);
  w[index] = 1.0;
  return TabularWeightModel(n, std::move(w));
}

}  // namespace

TEST_CASE("tabular model validation") {
  CHECK_THROWS_AS(TabularWeightModel(0, {}), InvalidDimensionError);
  CHECK_THROWS_AS(TabularWeightModel(2, {1, 1, 1}), InvalidDimensionError);
  CHECK_THROWS_AS(TabularWeightModel(1, {0, 0}), ZeroWeightError);
  CHECK_THROWS_AS(TabularWeightModel(1, {1, -1}), InvalidParameterError);
  CHECK_THROWS_AS(TabularWeightModel(1, {1, NAN}), InvalidParameterError);
  const TabularWeightModel m(2, {0, 2, 0.5, 0});
  CHECK(*m.log2_w_min() == -1.0);
  CHECK(*m.log2_w_max() == 1.0);
}

TEST_CASE("brute force log2 Z") {
  CHECK(brute_force_log2_Z(TabularWeightModel(5, std::vector<double>(32, 1.0))) == doctest::Approx(5.0).epsilon(1e-15));
  std::vector<double> w(8, 0.0);
  w[5] = 8.0;
  CHECK(brute_force_log2_Z(TabularWeightModel(3, w)) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(brute_force_log2_Z(TabularWeightModel(3, {1, 2, 3, 4, 5, 6, 7, 8})) ==
        doctest::Approx(std::log2(36.0)).epsilon(1e-15));
  CHECK(std::log2(36.0) == doctest::Approx(5.1699).epsilon(1e-4));
}

TEST_CASE("brute force delta") {
  RandomStream rng(12);
  const TabularWeightModel ones(6, std::vector<double>(64, 1.0));
  for (int t = 0; t < 10; ++t) {
    const auto c = sample_rademacher(6, rng);
    const auto [value, x] = brute_force_delta(ones, c);
    CHECK(value == 6.0);
    CHECK(std::equal(x.begin(), x.end(), c.entries().begin()));
  }
  const auto point = single_point(5, 13);
  const State x0 = state_from_index(13, 5);
  for (int t = 0; t < 10; ++t) {
    const auto c = sample_rademacher(5, rng);
    CHECK(brute_force_delta(point, c).first == c.dot(x0));
  }
  for (int t = 0; t < 20; ++t) {
    const auto m = random_tabular(4, rng);
    const auto c = sample_rademacher(4, rng);
    double best = -INFINITY;
    for (std::uint64_t i = 0; i < 16; ++i) {
      const State x = state_from_index(i, 4);
      best = std::max(best, c.dot(x) + m.log2_weight(x));
    }
    CHECK(brute_force_delta(m, c).first == best);
    CHECK(m.maximize(to_unary(c)).value == doctest::Approx(best).epsilon(1e-15));
    CHECK(m.maximize(to_unary(c)).argmax == brute_force_delta(m, c).second);
  }
}

TEST_CASE("exact weighted Rademacher complexity") {
  CHECK(exact_weighted_rademacher(TabularWeightModel(6, std::vector<double>(64, 1.0))) == 6.0);
  for (std::size_t n : {1U, 4U, 9U}) CHECK(exact_weighted_rademacher(single_point(n, 1)) == doctest::Approx(0.0));
  RandomStream rng(31);
  const auto m = random_tabular(7, rng);
  CHECK(exact_weighted_rademacher(m.scaled(5.0)) ==
        doctest::Approx(exact_weighted_rademacher(m) + std::log2(5.0)).epsilon(1e-13));
  CHECK_THROWS_AS(exact_weighted_rademacher(random_tabular(13, rng)), InvalidDimensionError);
}

TEST_CASE("grid exact ln Z") {
  SUBCASE("uniform 3x3") {
    const auto m = GridIsingModel::generate(3, 3, 0.0, 0);
    const GridIsingModel zero(3, 3, std::vector<double>(9, 0.0), [] {
      std::vector<Coupling> e;
      for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c) {
          const std::size_t i = r * 3 + c;
          if (c + 1 < 3) e.push_back({i, i + 1, 0.0});
          if (r + 1 < 3) e.push_back({i, i + 3, 0.0});
        }
      return e;
    }());
    CHECK(grid_exact_ln_Z(zero) == doctest::Approx(9 * std::log(2.0)).epsilon(1e-14));
    double closed = 0.0;
    for (double f : m.theta_local()) closed += std::log(2.0 * std::cosh(f));
    CHECK(grid_exact_ln_Z(m) == doctest::Approx(closed).epsilon(1e-13));
  }
  SUBCASE("2x2 and rectangular grids vs enumeration") {
    for (auto [r, c] : {std::pair{2, 2}, std::pair{2, 5}, std::pair{4, 3}, std::pair{1, 7}}) {
      const auto m = GridIsingModel::generate(r, c, 2.0, 100 + r * 10 + c);
      const std::size_t n = m.dimension();
      std::vector<double> logs;
      for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
        double v = 0.0;
        auto s = [&](std::size_t i) { return ((mask >> i) & 1U) ? 1.0 : -1.0; };
        for (std::size_t i = 0; i < n; ++i) v += m.theta_local()[i] * s(i);
        for (const auto& cp : m.couplings()) v += cp.theta * s(cp.i) * s(cp.j);
        logs.push_back(v);
      }
      CHECK(std::abs(grid_exact_ln_Z(m) - log_sum_exp(logs)) <= 1e-10);
    }
  }
  SUBCASE("single column vs chain transfer") {
    const auto m = GridIsingModel::generate(9, 1, 1.5, 3);
    // Forward messages over a chain: f(x_i) = log sum_{x_{i-1}} exp(...).
    const auto h = m.theta_local();
    double fm = -h[0];
    double fp = h[0];
    for (std::size_t i = 1; i < 9; ++i) {
      const double J = m.couplings()[i - 1].theta;
      const double nm = std::log(std::exp(fm + J) + std::exp(fp - J)) - h[i];
      const double np = std::log(std::exp(fm - J) + std::exp(fp + J)) + h[i];
      fm = nm;
      fp = np;
    }
    CHECK(grid_exact_ln_Z(m) == doctest::Approx(std::log(std::exp(fm) + std::exp(fp))).epsilon(1e-13));
  }
}

TEST_CASE("log_sum_exp") {
  CHECK(log_sum_exp(std::vector<double>{}) == -INFINITY);
  CHECK(log_sum_exp(std::vector<double>{1000.0, 1000.0}) == doctest::Approx(1000.0 + std::log(2.0)));
}

TEST_CASE("scaling shifts the oracle value by log2 a") {
  RandomStream rng(8);
  const auto m = random_tabular(8, rng);
  for (double a : {0.5, 2.0, 10.0}) {
    const auto s = m.scaled(a);
    const auto c = sample_rademacher(8, rng);
    CHECK(delta(s, c).value == doctest::Approx(delta(m, c).value + std::log2(a)).epsilon(1e-13));
    CHECK(brute_force_log2_Z(s) == doctest::Approx(brute_force_log2_Z(m) + std::log2(a)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(m.scaled(0.0), InvalidParameterError);
}
