#pragma once

// Grid Ising spin glass with local fields and non-negative couplings:
//
//   theta(x) = sum_i theta_i x_i + sum_{(i,j) in grid} theta_ij x_i x_j
//   w(x)     = exp(theta(x))
//
// Potentials are stored in natural-log units and converted to log2 only at
// the oracle boundary. Nodes are indexed row-major: i = r * cols + c.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wrc/core.hpp"

namespace wrc {

struct Coupling {
  std::size_t i;
  std::size_t j;
  double theta;
};

class GridIsingModel final : public WeightModel {
 public:
  /// couplings must cover exactly the 4-neighbour grid edges, each with a
  /// non-negative strength; they are stored in canonical order (for each
  /// node row-major: right edge, then down edge).
  GridIsingModel(std::size_t rows, std::size_t cols, std::vector<double> theta_local,
                 std::vector<Coupling> couplings);

  /// Fields uniform on [-1, 1], couplings uniform on [0, coupling_max).
  static GridIsingModel generate(std::size_t rows, std::size_t cols, double coupling_max,
                                 std::uint64_t seed);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t dimension() const override { return theta_local_.size(); }
  std::span<const double> theta_local() const { return theta_local_; }
  std::span<const Coupling> couplings() const { return couplings_; }

  /// theta(x), natural-log units.
  double potential(std::span<const Spin> x) const;
  double log2_weight(std::span<const Spin> x) const override { return potential(x) / kLn2; }

  /// Exact MAP under unary perturbation via a minimum s-t cut.
  OracleResult maximize(const RealUnaryPerturbation& u) const override;

  /// Exact: MAP with zero perturbation.
  std::optional<double> log2_w_max() const override { return log2_w_max_; }
  /// (-sum|theta_i| - sum theta_ij) / ln 2, a certified lower bound.
  std::optional<double> log2_w_min() const override { return log2_w_min_bound_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> theta_local_;
  std::vector<Coupling> couplings_;
  double log2_w_max_ = 0.0;
  double log2_w_min_bound_ = 0.0;
};

OracleResult map_oracle(const GridIsingModel& model, const RealUnaryPerturbation& u);
double log2_w_max(const GridIsingModel& model);
double log2_w_min_lower_bound(const GridIsingModel& model);

/// Text format: "rows cols", then row-major fields, then one "i j theta_ij"
/// line per coupling. Numbers are written in shortest round-trip form.
void write_model(std::ostream& out, const GridIsingModel& model);
GridIsingModel read_model(std::istream& in);

}  // namespace wrc
