#pragma once

// Ground truth at desk scale: dense tabular weights with enumeration
// oracles, exhaustive weighted Rademacher complexity, and the exact grid
// partition function by column transfer.

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "wrc/core.hpp"
#include "wrc/rng.hpp"
#include "wrc/spinglass.hpp"

namespace wrc {

/// Weights indexed by state_from_index order (lexicographic, -1 < +1).
class TabularWeightModel final : public WeightModel {
 public:
  static constexpr std::size_t kMaxDimension = 24;

  TabularWeightModel(std::size_t n, std::vector<double> weights);
  /// Same, from log2 weights (-inf for zero weight).
  static TabularWeightModel from_log2(std::size_t n, std::vector<double> log2_weights);

  std::size_t dimension() const override { return n_; }
  std::span<const double> log2_weights() const { return log2_w_; }
  double log2_weight(std::span<const Spin> x) const override;

  OracleResult maximize(const RealUnaryPerturbation& u) const override;
  std::optional<double> log2_w_min() const override { return log2_w_min_; }
  std::optional<double> log2_w_max() const override { return log2_w_max_; }

  /// a * w, i.e. every log2 weight shifted by log2 a.
  TabularWeightModel scaled(double a) const;

 private:
  TabularWeightModel() = default;
  void finish();

  std::size_t n_ = 0;
  std::vector<double> log2_w_;
  double log2_w_min_ = 0.0;
  double log2_w_max_ = 0.0;
};

/// log2 sum_x w(x), accumulated with log-sum-exp.
double brute_force_log2_Z(const TabularWeightModel& model);

/// max_x { <c,x> + log2 w(x) } with the lexicographically smallest maximiser.
std::pair<double, State> brute_force_delta(const TabularWeightModel& model, const PerturbationVector& c);

/// Exact E_c[delta(c, w)] over all 2^n vectors c; n <= 12.
double exact_weighted_rademacher(const TabularWeightModel& model);

/// Exact ln Z of a grid model; min(rows, cols) <= 20.
double grid_exact_ln_Z(const GridIsingModel& model);

/// Random test model drawn from a mix of families: dense log-uniform,
/// sparse, Hamming-peaked and 0/1 indicator weights.
TabularWeightModel random_tabular(std::size_t n, RandomStream& rng);

/// ln sum exp(v), stable; -inf for an empty or all -inf input.
double log_sum_exp(std::span<const double> values);

}  // namespace wrc
