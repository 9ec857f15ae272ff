#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wrc/exact.hpp"
#include "wrc/gumbel.hpp"

using namespace wrc;

namespace {

TabularWeightModel single_point_ln(std::size_t n, std::uint64_t index, double ln_weight) {
  std::vector<double> w(std::size_t{1} << n, -INFINITY);
  w[index] = ln_weight / kLn2;
  return TabularWeightModel::from_log2(n, std::move(w));
}

// Second evaluation path for the slack: each candidate written out longhand.
double slack_longhand(double n, double k, double alpha) {
  const double L = std::log(2.0 / alpha);
  const double first = 2.0 * std::sqrt(n) * std::pow(1.0 + std::sqrt(L / (2.0 * k)), 2);
  const double second = std::sqrt(n) * std::max(4.0 * L / k, std::sqrt(32.0 * L / k));
  return first < second ? first : second;
}

}  // namespace

TEST_CASE("shifted Gumbel sampler") {
  CHECK(shifted_gumbel_from_uniform(std::exp(-1.0)) == doctest::Approx(-kEulerMascheroni).epsilon(1e-15));
  CHECK_THROWS_AS(shifted_gumbel_from_uniform(0.0), InvalidParameterError);
  CHECK_THROWS_AS(shifted_gumbel_from_uniform(1.0), InvalidParameterError);

  RandomStream rng(2024);
  constexpr int kDraws = 1000000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const double g = sample_shifted_gumbel(rng);
    sum += g;
    sum_sq += g * g;
  }
  const double mean = sum / kDraws;
  const double var = sum_sq / kDraws - mean * mean;
  CHECK(std::abs(mean) <= 0.01);
  CHECK(std::abs(var - std::numbers::pi * std::numbers::pi / 6.0) <= 0.05);
}

TEST_CASE("single-point model: every trial sees only x0") {
  const double b = 1.7;
  const auto model = single_point_ln(5, 19, b);
  const auto up = gumbel_upper_estimate(model, GumbelConfig{4000, 0.05, 3});
  const auto lo = gumbel_lower_estimate(model, GumbelConfig{4000, 0.05, 3});
  CHECK(std::abs(lo.mean - b) <= 4.0 * lo.stddev / std::sqrt(4000.0));
  CHECK(std::abs(up.mean - b) <= 4.0 * up.stddev / std::sqrt(4000.0));
}

TEST_CASE("n = 1 full cube: E max of two Gumbels is ln 2") {
  const auto model = TabularWeightModel::from_log2(1, {0.0, 0.0});
  const auto up = gumbel_upper_estimate(model, GumbelConfig{200000, 0.05, 8});
  CHECK(std::abs(up.mean - std::numbers::ln2) <= 4.0 * up.stddev / std::sqrt(200000.0));
}

TEST_CASE("expectation bounds bracket ln Z on n = 8") {
  for (std::uint64_t s = 0; s < 4; ++s) {
    RandomStream rng = RandomStream::derive(s, StreamDomain::test, 8);
    const auto model = random_tabular(8, rng);
    const double ln_z = brute_force_log2_Z(model) * kLn2;
    const GumbelConfig cfg{2000, 0.05, s};
    const auto up = gumbel_upper_estimate(model, cfg);
    const auto lo = gumbel_lower_estimate(model, cfg);
    CHECK(up.mean >= ln_z - 3.0 * up.stddev / std::sqrt(2000.0));
    CHECK(lo.mean <= ln_z + 3.0 * lo.stddev / std::sqrt(2000.0));
  }
}

TEST_CASE("scaling w by a shifts every trial by ln a") {
  RandomStream rng(6);
  const auto model = random_tabular(6, rng);
  const auto scaled = model.scaled(3.0);
  const GumbelConfig cfg{50, 0.05, 12};
  const auto a = gumbel_lower_estimate(model, cfg);
  const auto b = gumbel_lower_estimate(scaled, cfg);
  const auto c = gumbel_upper_estimate(model, cfg);
  const auto d = gumbel_upper_estimate(scaled, cfg);
  for (std::size_t t = 0; t < 50; ++t) {
    CHECK(b.trials[t] - a.trials[t] == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    CHECK(d.trials[t] - c.trials[t] == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  }
}

TEST_CASE("gumbel slack") {
  CHECK(gumbel_slack(4, 2, 2.0 / std::exp(1.0)) == doctest::Approx(8.0).epsilon(1e-14));
  const double e10 = gumbel_slack(20, 10, 0.05);
  const double e100 = gumbel_slack(20, 100, 0.05);
  const double e1000 = gumbel_slack(20, 1000, 0.05);
  CHECK(e10 > e100);
  CHECK(e100 > e1000);
  CHECK(gumbel_slack(49, 5, 0.05) == doctest::Approx(slack_longhand(49, 5, 0.05)).epsilon(1e-14));
  CHECK(gumbel_slack(7, 33, 0.2) == doctest::Approx(slack_longhand(7, 33, 0.2)).epsilon(1e-14));
  CHECK_THROWS_AS(gumbel_slack(4, 2, 0.0), InvalidParameterError);
  CHECK_THROWS_AS(gumbel_slack(4, 2, 1.0), InvalidParameterError);
}

TEST_CASE("gumbel report offsets") {
  RandomStream rng(13);
  const auto model = random_tabular(7, rng);
  const auto r = gumbel_bound(model, GumbelConfig{5, 0.05, 1});
  CHECK(r.theta_ub == r.theta_ub_hat + r.epsilon_g);
  CHECK(r.theta_lb == r.theta_lb_hat - r.epsilon_g / 7.0);
  CHECK(r.theta_ub >= r.theta_ub_hat);
  CHECK(r.theta_lb <= r.theta_lb_hat);
}

TEST_CASE("gumbel config validation") {
  CHECK_THROWS_AS((GumbelConfig{0, 0.05, 0}.validate()), InvalidParameterError);
  CHECK_THROWS_AS((GumbelConfig{1, 1.5, 0}.validate()), InvalidParameterError);
}
