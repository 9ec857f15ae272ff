#pragma once

// High-probability bounds on log2 Z(w) from perturbed maximization with
// Rademacher vectors c ~ Uniform({-1,1}^n).
//
//   estimate     delta_bar_k = mean_i max_x { <c_i,x> + log2 w(x) }
//   lower_bound  psi_LB, optimal lambda of the weighted Massart inequality
//   upper_bound  psi_UB, optimal beta of the weighted tree-splitting inequality
//   bound        all three on one estimator; each side holds w.p. >= 0.95
//
// The estimator concentrates within sqrt(6n/k) of the weighted Rademacher
// complexity with probability >= 0.95 (McDiarmid with bounded differences 2).

#include <cstddef>
#include <optional>
#include <vector>

#include "wrc/core.hpp"

namespace wrc {

/// sqrt(6n / k)
double slack(std::size_t n, std::size_t k);

struct EstimatorResult {
  std::size_t n = 0;
  double delta_bar = 0.0;
  std::vector<double> per_sample_deltas;
  std::vector<State> witnesses;

  std::size_t k() const { return per_sample_deltas.size(); }

  /// Builds a result from raw per-sample values; witnesses left empty.
  static EstimatorResult from_deltas(std::size_t n, std::vector<double> deltas);

  /// Replaces sample i and refreshes the mean.
  void replace(std::size_t i, double value, State witness);
};

/// Draws k Rademacher vectors from substreams (seed, i) and averages the
/// oracle values.
EstimatorResult estimate(const WeightModel& model, const BoundConfig& cfg);

/// What to do when the draw is degenerate (lambda < 0 or a <= 0): report it
/// so the caller can resample, or use the branch that needs no w_min.
enum class DegeneratePolicy { signal, fall_back };

enum class LambdaRegime { quadratic, linear, no_wmin };

struct LambdaDiagnostics {
  std::optional<double> lambda;
  LambdaRegime regime = LambdaRegime::no_wmin;
  std::optional<double> a_value;  // delta_bar - slack - log2 w_min
  bool fallback = false;
};

struct LowerBound {
  double psi_lb;
  LambdaDiagnostics diag;
  bool resample_needed = false;
};

LowerBound lower_bound(const EstimatorResult& est, const BoundConfig& cfg,
                       std::optional<double> log2_w_min, std::optional<double> log2_w_max,
                       DegeneratePolicy policy = DegeneratePolicy::signal);

enum class WStarChoice { w_min, w_max, none };

struct BetaDiagnostics {
  std::optional<double> beta_min;
  std::optional<double> beta_max;
  double beta_opt = 1.0 / 3.0;
  WStarChoice w_star_choice = WStarChoice::none;
  std::optional<double> a_value;  // delta_bar + slack - log2 w*
  /// Only w_max known and beta_max below 1/3: no case applies, routed to 1/3.
  bool wmax_only_below_third = false;
  bool fallback = false;
};

struct UpperBound {
  double psi_ub;
  BetaDiagnostics diag;
  bool resample_needed = false;
};

UpperBound upper_bound(const EstimatorResult& est, const BoundConfig& cfg,
                       std::optional<double> log2_w_min, std::optional<double> log2_w_max,
                       DegeneratePolicy policy = DegeneratePolicy::signal);

/// Runs estimate, lower_bound and upper_bound on one estimator. Degenerate
/// draws resample the smallest per-sample delta from a fresh substream, at
/// most cfg.resample_limit times, after which the fallback branches apply.
BoundReport bound(const WeightModel& model, const BoundConfig& cfg);

/// Same, with explicit w_min/w_max overriding what the model reports.
BoundReport bound(const WeightModel& model, const BoundConfig& cfg,
                  std::optional<double> log2_w_min, std::optional<double> log2_w_max);

}  // namespace wrc
