#include <doctest.h>

#include <cmath>
#include <sstream>

#include "wrc/rng.hpp"
#include "wrc/spinglass.hpp"

using namespace wrc;

namespace {

std::vector<Coupling> grid_edges(std::size_t rows, std::size_t cols, double theta) {
  std::vector<Coupling> out;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t i = r * cols + c;
      if (c + 1 < cols) out.push_back({i, i + 1, theta});
      if (r + 1 < rows) out.push_back({i, i + cols, theta});
    }
  }
  return out;
}

State state_of(std::uint32_t mask, std::size_t n) {
  State x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = ((mask >> i) & 1U) ? 1 : -1;
  return x;
}

double direct_potential(const GridIsingModel& m, const State& x) {
  double v = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) v += m.theta_local()[i] * x[i];
  for (const auto& cp : m.couplings()) v += cp.theta * x[cp.i] * x[cp.j];
  return v;
}

}  // namespace

TEST_CASE("generate") {
  const auto m = GridIsingModel::generate(7, 7, 2.0, 5);
  CHECK(m.dimension() == 49);
  CHECK(m.couplings().size() == 84);
  for (const auto& cp : m.couplings()) CHECK((cp.theta >= 0.0 && cp.theta < 2.0));

  const auto flat = GridIsingModel::generate(3, 4, 0.0, 5);
  for (const auto& cp : flat.couplings()) CHECK(cp.theta == 0.0);

  const auto big = GridIsingModel::generate(100, 100, 1.0, 9);
  double sum = 0.0;
  for (double f : big.theta_local()) {
    CHECK((f >= -1.0 && f <= 1.0));
    sum += f;
  }
  CHECK(std::abs(sum / 10000.0) <= 0.05);

  CHECK_THROWS_AS(GridIsingModel::generate(0, 3, 1.0, 0), InvalidDimensionError);
  CHECK_THROWS_AS(GridIsingModel::generate(2, 2, -1.0, 0), InvalidParameterError);
}

TEST_CASE("constructor validates the edge set") {
  CHECK_NOTHROW(GridIsingModel(2, 2, {0, 0, 0, 0}, grid_edges(2, 2, 1.0)));
  CHECK_THROWS_AS(GridIsingModel(2, 2, {0, 0, 0, 0}, grid_edges(2, 2, -0.5)), InvalidParameterError);
  auto missing = grid_edges(2, 2, 1.0);
  missing.pop_back();
  CHECK_THROWS_AS(GridIsingModel(2, 2, {0, 0, 0, 0}, missing), InvalidParameterError);
  auto diagonal = grid_edges(2, 2, 1.0);
  diagonal.back() = {0, 3, 1.0};
  CHECK_THROWS_AS(GridIsingModel(2, 2, {0, 0, 0, 0}, diagonal), InvalidParameterError);
  CHECK_THROWS_AS(GridIsingModel(2, 2, {0, 0, 0}, grid_edges(2, 2, 1.0)), InvalidDimensionError);
}

TEST_CASE("log2 weight") {
  const GridIsingModel zero(3, 3, std::vector<double>(9, 0.0), grid_edges(3, 3, 0.0));
  for (std::uint32_t mask = 0; mask < 512; ++mask) CHECK(zero.log2_weight(state_of(mask, 9)) == 0.0);

  const GridIsingModel one(1, 1, {1.0}, {});
  CHECK(one.log2_weight(State{1}) == doctest::Approx(1.0 / kLn2).epsilon(1e-15));
  CHECK(one.log2_weight(State{-1}) == doctest::Approx(-1.0 / kLn2).epsilon(1e-15));

  const auto m = GridIsingModel::generate(2, 2, 3.0, 17);
  for (std::uint32_t mask = 0; mask < 16; ++mask) {
    const State x = state_of(mask, 4);
    CHECK(std::abs(m.log2_weight(x) - direct_potential(m, x) / kLn2) <= 1e-12);
  }
}

TEST_CASE("MAP oracle") {
  SUBCASE("zero couplings separate") {
    RandomStream rng(3);
    const auto m = GridIsingModel::generate(3, 3, 0.0, 4);
    std::vector<RealUnaryPerturbation::Pair> pairs;
    for (int i = 0; i < 9; ++i) pairs.push_back({rng.uniform(-2, 2), rng.uniform(-2, 2)});
    const RealUnaryPerturbation u(pairs);
    const auto r = map_oracle(m, u);
    double expect = 0.0;
    for (std::size_t i = 0; i < 9; ++i) {
      const double plus = pairs[i].at_plus + m.theta_local()[i] / kLn2;
      const double minus = pairs[i].at_minus - m.theta_local()[i] / kLn2;
      expect += std::max(plus, minus);
      if (plus != minus) CHECK(r.argmax[i] == (plus > minus ? 1 : -1));
    }
    CHECK(r.value == doctest::Approx(expect).epsilon(1e-12));
  }
  SUBCASE("ferromagnetic with positive fields is all +1") {
    const GridIsingModel m(3, 3, std::vector<double>(9, 0.3), grid_edges(3, 3, 0.7));
    const auto r = map_oracle(m, RealUnaryPerturbation::zeros(9));
    CHECK(r.argmax == State(9, 1));
  }
  SUBCASE("4x4 random vs enumeration") {
    RandomStream rng(41);
    for (int t = 0; t < 10; ++t) {
      const auto m = GridIsingModel::generate(4, 4, rng.uniform(0, 4), rng.next_u64());
      const auto c = sample_rademacher(16, rng);
      double best = -INFINITY;
      for (std::uint32_t mask = 0; mask < (1U << 16); ++mask) {
        const State x = state_of(mask, 16);
        best = std::max(best, c.dot(x) + direct_potential(m, x) / kLn2);
      }
      const auto r = map_oracle(m, to_unary(c));
      CHECK(r.value == doctest::Approx(best).epsilon(1e-12));
      CHECK(c.dot(r.argmax) + direct_potential(m, r.argmax) / kLn2 == doctest::Approx(best).epsilon(1e-12));
    }
  }
  SUBCASE("ties resolve to the lexicographically smallest state") {
    // Two isolated spins with zero fields: every state ties.
    const GridIsingModel m(1, 2, {0.0, 0.0}, grid_edges(1, 2, 0.0));
    CHECK(map_oracle(m, RealUnaryPerturbation::zeros(2)).argmax == State{-1, -1});
  }
}

TEST_CASE("weight bounds") {
  const GridIsingModel zero(2, 2, {0, 0, 0, 0}, grid_edges(2, 2, 0.0));
  CHECK(log2_w_max(zero) == 0.0);
  CHECK(log2_w_min_lower_bound(zero) == 0.0);

  const GridIsingModel neg(1, 1, {-2.0}, {});
  CHECK(log2_w_max(neg) == doctest::Approx(2.0 / kLn2).epsilon(1e-15));
  const GridIsingModel pos(1, 1, {1.0}, {});
  CHECK(log2_w_min_lower_bound(pos) == doctest::Approx(-1.0 / kLn2).epsilon(1e-15));

  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto m = GridIsingModel::generate(3, 3, 2.5, s);
    double hi = -INFINITY;
    double lo = INFINITY;
    for (std::uint32_t mask = 0; mask < 512; ++mask) {
      const double v = direct_potential(m, state_of(mask, 9)) / kLn2;
      hi = std::max(hi, v);
      lo = std::min(lo, v);
    }
    CHECK(log2_w_max(m) == doctest::Approx(hi).epsilon(1e-12));
    CHECK(log2_w_min_lower_bound(m) <= lo + 1e-12);
  }
}

TEST_CASE("text round trip") {
  const auto m = GridIsingModel::generate(3, 5, 1.3, 8);
  std::stringstream io;
  write_model(io, m);
  const auto back = read_model(io);
  CHECK(back.rows() == 3);
  CHECK(back.cols() == 5);
  for (std::size_t i = 0; i < 15; ++i) CHECK(back.theta_local()[i] == m.theta_local()[i]);
  for (std::size_t e = 0; e < m.couplings().size(); ++e) CHECK(back.couplings()[e].theta == m.couplings()[e].theta);

  std::stringstream bad("2 2\n0 0 0\n");
  CHECK_THROWS(read_model(bad));
}
