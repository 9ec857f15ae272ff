#include <doctest.h>

#include <cmath>
#include <numeric>

#include "wrc/core.hpp"
#include "wrc/rng.hpp"

using namespace wrc;

TEST_CASE("state indexing puts variable 0 in the most significant bit") {
  CHECK(state_from_index(0, 3) == State{-1, -1, -1});
  CHECK(state_from_index(1, 3) == State{-1, -1, 1});
  CHECK(state_from_index(4, 3) == State{1, -1, -1});
  for (std::uint64_t i = 0; i < 32; ++i) CHECK(index_of(state_from_index(i, 5)) == i);
}

TEST_CASE("perturbation vectors reject bad entries") {
  CHECK_THROWS_AS(PerturbationVector({}), InvalidDimensionError);
  CHECK_THROWS_AS(PerturbationVector({1, 0}), InvalidParameterError);
  CHECK_THROWS_AS(PerturbationVector({2}), InvalidParameterError);
  CHECK_NOTHROW(PerturbationVector({1, -1}));
}

TEST_CASE("unary perturbations reject non-finite values") {
  CHECK_THROWS_AS(RealUnaryPerturbation({{0.0, NAN}}), InvalidParameterError);
  CHECK_THROWS_AS(RealUnaryPerturbation({{INFINITY, 0.0}}), InvalidParameterError);
}

TEST_CASE("sample_rademacher") {
  SUBCASE("n = 1 gives a single sign") {
    RandomStream rng(3);
    const auto c = sample_rademacher(1, rng);
    REQUIRE(c.size() == 1);
    CHECK((c[0] == 1 || c[0] == -1));
  }
  SUBCASE("same seed gives the same vector") {
    RandomStream a = RandomStream::derive(7, StreamDomain::rademacher, 2);
    RandomStream b = RandomStream::derive(7, StreamDomain::rademacher, 2);
    const auto ca = sample_rademacher(64, a);
    const auto cb = sample_rademacher(64, b);
    CHECK(std::equal(ca.entries().begin(), ca.entries().end(), cb.entries().begin()));
  }
  SUBCASE("empirical mean of 10^4 entries is near zero") {
    // Std of the mean is 0.01, so 0.05 is a five-sigma band.
    RandomStream rng(11);
    const auto c = sample_rademacher(10000, rng);
    const double mean = std::accumulate(c.entries().begin(), c.entries().end(), 0.0) / 10000.0;
    CHECK(std::abs(mean) <= 0.05);
  }
  SUBCASE("n = 0 is rejected") {
    RandomStream rng(1);
    CHECK_THROWS_AS(sample_rademacher(0, rng), InvalidDimensionError);
  }
}

TEST_CASE("to_unary") {
  const auto u = to_unary(PerturbationVector({1}));
  CHECK(u[0].at_minus == -1.0);
  CHECK(u[0].at_plus == 1.0);

  const State x{1, 1};
  CHECK(to_unary(PerturbationVector({-1, -1})).evaluate(x) == -2.0);

  RandomStream rng(5);
  for (int t = 0; t < 20; ++t) {
    const auto c = sample_rademacher(16, rng);
    State y(16);
    for (auto& s : y) s = rng.spin();
    int dot = 0;
    for (std::size_t i = 0; i < 16; ++i) dot += c[i] * y[i];
    CHECK(to_unary(c).evaluate(y) == static_cast<double>(dot));
    CHECK(c.dot(y) == dot);
  }
}

TEST_CASE("derived streams differ across domains and indices") {
  auto a = RandomStream::derive(1, StreamDomain::rademacher, 0);
  auto b = RandomStream::derive(1, StreamDomain::gumbel_upper, 0);
  auto c = RandomStream::derive(1, StreamDomain::rademacher, 1);
  const auto x = a.next_u64();
  CHECK(x != b.next_u64());
  CHECK(x != c.next_u64());
}

TEST_CASE("uniforms stay in range") {
  RandomStream rng(9);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform01();
    CHECK((u >= 0.0 && u < 1.0));
    const double v = rng.uniform_open01();
    CHECK((v > 0.0 && v < 1.0));
  }
}

TEST_CASE("bound config validation") {
  CHECK_THROWS_AS((BoundConfig{0, 0, 10}.validate()), InvalidParameterError);
  CHECK_THROWS_AS((BoundConfig{1, 0, -1}.validate()), InvalidParameterError);
  CHECK_NOTHROW((BoundConfig{1, 0, 0}.validate()));
}

TEST_CASE("ln view multiplies by ln 2") {
  BoundReport r;
  r.delta_bar = 3.0;
  r.psi_lb = -1.5;
  r.psi_ub = 10.0;
  const auto v = r.ln_view();
  CHECK(v.delta_bar == 3.0 * kLn2);
  CHECK(v.psi_lb == -1.5 * kLn2);
  CHECK(v.psi_ub == 10.0 * kLn2);
}
