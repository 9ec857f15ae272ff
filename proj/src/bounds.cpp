#include "wrc/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "wrc/rng.hpp"

namespace wrc {
namespace {

constexpr double kThird = 1.0 / 3.0;
constexpr double kHalf = 0.5;

void check_shape(const EstimatorResult& est, const BoundConfig& cfg) {
  cfg.validate();
  if (est.n == 0) throw InvalidDimensionError("estimator has n = 0");
  if (est.k() != cfg.k) {
    throw InvalidParameterError("estimator was computed with k = " + std::to_string(est.k()) +
                                " but config has k = " + std::to_string(cfg.k));
  }
}

// L(beta) with w* fixed: n*beta*log2((1-beta)/beta) - n*log2(1-beta) + log2 w*
double tree_bound(double n, double beta, double log2_w_star) {
  return n * beta * std::log2((1.0 - beta) / beta) - n * std::log2(1.0 - beta) + log2_w_star;
}

}  // namespace

double slack(std::size_t n, std::size_t k) {
  if (n == 0 || k == 0) throw InvalidParameterError("slack requires n >= 1 and k >= 1");
  return std::sqrt(6.0 * static_cast<double>(n) / static_cast<double>(k));
}

EstimatorResult EstimatorResult::from_deltas(std::size_t n, std::vector<double> deltas) {
  EstimatorResult est;
  est.n = n;
  est.per_sample_deltas = std::move(deltas);
  est.delta_bar = std::accumulate(est.per_sample_deltas.begin(), est.per_sample_deltas.end(), 0.0) /
                  static_cast<double>(est.per_sample_deltas.size());
  return est;
}

void EstimatorResult::replace(std::size_t i, double value, State witness) {
  per_sample_deltas.at(i) = value;
  if (i < witnesses.size()) witnesses[i] = std::move(witness);
  delta_bar = std::accumulate(per_sample_deltas.begin(), per_sample_deltas.end(), 0.0) /
              static_cast<double>(per_sample_deltas.size());
}

EstimatorResult estimate(const WeightModel& model, const BoundConfig& cfg) {
  cfg.validate();
  const std::size_t n = model.dimension();
  if (n == 0) throw InvalidDimensionError("estimate: model dimension must be >= 1");

  EstimatorResult est;
  est.n = n;
  est.per_sample_deltas.reserve(cfg.k);
  est.witnesses.reserve(cfg.k);
  for (std::size_t i = 0; i < cfg.k; ++i) {
    RandomStream rng = RandomStream::derive(cfg.seed, StreamDomain::rademacher, i);
    OracleResult r = delta(model, sample_rademacher(n, rng));
    est.per_sample_deltas.push_back(r.value);
    est.witnesses.push_back(std::move(r.argmax));
  }
  est.delta_bar = std::accumulate(est.per_sample_deltas.begin(), est.per_sample_deltas.end(), 0.0) /
                  static_cast<double>(cfg.k);
  return est;
}

LowerBound lower_bound(const EstimatorResult& est, const BoundConfig& cfg,
                       std::optional<double> log2_w_min, std::optional<double> log2_w_max,
                       DegeneratePolicy policy) {
  check_shape(est, cfg);
  const double n = static_cast<double>(est.n);
  const double s = slack(est.n, cfg.k);

  LowerBound out{0.0, {}, false};
  bool use_linear = true;
  if (log2_w_min) {
    const double a = est.delta_bar - s - *log2_w_min;
    const double lambda = a / n;
    out.diag.a_value = a;
    out.diag.lambda = lambda;
    if (lambda < 0.0) {
      if (policy == DegeneratePolicy::signal) out.resample_needed = true;
      out.diag.fallback = true;
      out.diag.regime = LambdaRegime::no_wmin;
    } else if (lambda <= 1.0) {
      out.psi_lb = a * a / (2.0 * n) + *log2_w_min;
      out.diag.regime = LambdaRegime::quadratic;
      use_linear = false;
    } else {
      out.diag.regime = LambdaRegime::linear;
    }
  }
  if (use_linear) out.psi_lb = est.delta_bar - s - n / 2.0;
  if (log2_w_max) out.psi_lb = std::max(out.psi_lb, *log2_w_max);
  return out;
}

UpperBound upper_bound(const EstimatorResult& est, const BoundConfig& cfg,
                       std::optional<double> log2_w_min, std::optional<double> log2_w_max,
                       DegeneratePolicy policy) {
  check_shape(est, cfg);
  const double n = static_cast<double>(est.n);
  const double s = slack(est.n, cfg.k);

  UpperBound out{0.0, {}, false};
  BetaDiagnostics& d = out.diag;
  if (log2_w_min) d.beta_min = (est.delta_bar + s - *log2_w_min) / n;
  if (log2_w_max) d.beta_max = (est.delta_bar + s - *log2_w_max) / n;

  // a <= 0 means the slack event failed; the selector below assumes a > 0.
  const std::optional<double>& guard = d.beta_min ? d.beta_min : d.beta_max;
  if (guard && *guard <= 0.0) {
    d.a_value = *guard * n;
    if (policy == DegeneratePolicy::signal) out.resample_needed = true;
    d.fallback = true;
    d.beta_opt = kThird;
    d.w_star_choice = WStarChoice::none;
    out.psi_ub = est.delta_bar + s + n * std::log2(1.5);
    return out;
  }

  // Case order as printed; exact boundary values fall through to 1/3.
  if (d.beta_min && 0.0 < *d.beta_min && *d.beta_min < kThird) {
    d.beta_opt = *d.beta_min;
    d.w_star_choice = WStarChoice::w_min;
  } else if (d.beta_max && kThird < *d.beta_max && *d.beta_max < kHalf) {
    d.beta_opt = *d.beta_max;
    d.w_star_choice = WStarChoice::w_max;
  } else if (d.beta_max && kHalf < *d.beta_max) {
    d.beta_opt = kHalf;
    d.w_star_choice = WStarChoice::w_max;
  } else {
    d.beta_opt = kThird;
    d.w_star_choice = WStarChoice::none;
    d.wmax_only_below_third = !d.beta_min && d.beta_max && *d.beta_max < kThird;
  }

  if (d.w_star_choice == WStarChoice::none) {
    out.psi_ub = est.delta_bar + s + n * std::log2(1.5);
  } else if (d.beta_opt == kHalf) {
    d.a_value = est.delta_bar + s - *log2_w_max;
    out.psi_ub = n + *log2_w_max;
  } else {
    const double log2_w_star = d.w_star_choice == WStarChoice::w_min ? *log2_w_min : *log2_w_max;
    d.a_value = est.delta_bar + s - log2_w_star;
    out.psi_ub = tree_bound(n, d.beta_opt, log2_w_star);
  }
  return out;
}

BoundReport bound(const WeightModel& model, const BoundConfig& cfg) {
  return bound(model, cfg, model.log2_w_min(), model.log2_w_max());
}

BoundReport bound(const WeightModel& model, const BoundConfig& cfg,
                  std::optional<double> log2_w_min, std::optional<double> log2_w_max) {
  EstimatorResult est = estimate(model, cfg);
  const std::size_t n = est.n;

  int resamples = 0;
  for (;;) {
    const LowerBound lb = lower_bound(est, cfg, log2_w_min, log2_w_max);
    const UpperBound ub = upper_bound(est, cfg, log2_w_min, log2_w_max);
    if (!lb.resample_needed && !ub.resample_needed) break;
    if (resamples >= cfg.resample_limit) break;

    const auto worst = std::min_element(est.per_sample_deltas.begin(), est.per_sample_deltas.end());
    const auto idx = static_cast<std::size_t>(worst - est.per_sample_deltas.begin());
    RandomStream rng =
        RandomStream::derive(cfg.seed, StreamDomain::rademacher, cfg.k + static_cast<std::uint64_t>(resamples));
    OracleResult r = delta(model, sample_rademacher(n, rng));
    est.replace(idx, r.value, std::move(r.argmax));
    ++resamples;
  }

  const LowerBound lb = lower_bound(est, cfg, log2_w_min, log2_w_max, DegeneratePolicy::fall_back);
  const UpperBound ub = upper_bound(est, cfg, log2_w_min, log2_w_max, DegeneratePolicy::fall_back);

  BoundReport report;
  report.n = n;
  report.k = cfg.k;
  report.delta_bar = est.delta_bar;
  report.slack = slack(n, cfg.k);
  report.psi_lb = lb.psi_lb;
  report.psi_ub = ub.psi_ub;
  report.lambda_used = lb.diag.lambda;
  report.beta_opt = ub.diag.beta_opt;
  report.resamples_used = resamples;
  report.lower_fallback = lb.diag.fallback;
  report.upper_fallback = ub.diag.fallback;
  return report;
}

}  // namespace wrc
