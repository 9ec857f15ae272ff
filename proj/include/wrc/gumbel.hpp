#pragma once

// Low-dimensional Gumbel perturb-and-MAP bounds on ln Z, used as the
// comparison baseline. All quantities here are in natural-log units.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "wrc/core.hpp"
#include "wrc/rng.hpp"

namespace wrc {

inline constexpr double kEulerMascheroni = 0.57721566490153286061;

struct GumbelConfig {
  std::size_t k = 1;
  double alpha = 0.05;
  std::uint64_t seed = 0;

  void validate() const;
};

/// G - gamma_EM with G = -ln(-ln u); u must lie in (0, 1).
double shifted_gumbel_from_uniform(double u);
double sample_shifted_gumbel(RandomStream& rng);

struct GumbelEstimate {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation over trials
  std::vector<double> trials;
};

/// E_gamma[ max_x ln w(x) + sum_i gamma_i(x_i) ], estimated from cfg.k trials.
GumbelEstimate gumbel_upper_estimate(const WeightModel& model, const GumbelConfig& cfg);

/// E_gamma[ max_x ln w(x) + sum_i gamma_i(x_i) / n ], estimated from cfg.k trials.
GumbelEstimate gumbel_lower_estimate(const WeightModel& model, const GumbelConfig& cfg);

/// High-probability slack for the expectation bounds above.
double gumbel_slack(std::size_t n, std::size_t k, double alpha);

struct GumbelReport {
  double theta_ub_hat = 0.0;
  double theta_lb_hat = 0.0;
  double epsilon_g = 0.0;
  double theta_ub = 0.0;  // theta_ub_hat + epsilon_g
  double theta_lb = 0.0;  // theta_lb_hat - epsilon_g / n
};

GumbelReport gumbel_bound(const WeightModel& model, const GumbelConfig& cfg);

}  // namespace wrc
