#include "wrc/gumbel.hpp"

#include <algorithm>
#include <cmath>

namespace wrc {
namespace {

// One trial: 2n fresh unaries, divided by ln 2 for the log2 oracle and the
// optimum scaled back to natural-log units.
double gumbel_trial(const WeightModel& model, RandomStream& rng, double scale) {
  const std::size_t n = model.dimension();
  std::vector<RealUnaryPerturbation::Pair> pairs(n);
  for (auto& p : pairs) {
    p.at_minus = sample_shifted_gumbel(rng) * scale / kLn2;
    p.at_plus = sample_shifted_gumbel(rng) * scale / kLn2;
  }
  return model.maximize(RealUnaryPerturbation(std::move(pairs))).value * kLn2;
}

GumbelEstimate run_trials(const WeightModel& model, const GumbelConfig& cfg, StreamDomain domain,
                          double scale) {
  cfg.validate();
  if (model.dimension() == 0) throw InvalidDimensionError("gumbel: model dimension must be >= 1");
  GumbelEstimate out;
  out.trials.reserve(cfg.k);
  for (std::size_t t = 0; t < cfg.k; ++t) {
    RandomStream rng = RandomStream::derive(cfg.seed, domain, t);
    out.trials.push_back(gumbel_trial(model, rng, scale));
  }
  double sum = 0.0;
  for (double v : out.trials) sum += v;
  out.mean = sum / static_cast<double>(cfg.k);
  if (cfg.k > 1) {
    double ss = 0.0;
    for (double v : out.trials) ss += (v - out.mean) * (v - out.mean);
    out.stddev = std::sqrt(ss / static_cast<double>(cfg.k - 1));
  }
  return out;
}

}  // namespace

void GumbelConfig::validate() const {
  if (k < 1) throw InvalidParameterError("gumbel: k must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidParameterError("gumbel: alpha must lie in (0, 1)");
}

double shifted_gumbel_from_uniform(double u) {
  if (!(u > 0.0 && u < 1.0)) throw InvalidParameterError("gumbel: uniform draw must lie in (0, 1)");
  return -std::log(-std::log(u)) - kEulerMascheroni;
}

double sample_shifted_gumbel(RandomStream& rng) {
  return shifted_gumbel_from_uniform(rng.uniform_open01());
}

GumbelEstimate gumbel_upper_estimate(const WeightModel& model, const GumbelConfig& cfg) {
  return run_trials(model, cfg, StreamDomain::gumbel_upper, 1.0);
}

GumbelEstimate gumbel_lower_estimate(const WeightModel& model, const GumbelConfig& cfg) {
  return run_trials(model, cfg, StreamDomain::gumbel_lower,
                    1.0 / static_cast<double>(model.dimension()));
}

double gumbel_slack(std::size_t n, std::size_t k, double alpha) {
  if (n == 0 || k == 0) throw InvalidParameterError("gumbel_slack requires n >= 1 and k >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidParameterError("gumbel_slack: alpha must lie in (0, 1)");
  const double root_n = std::sqrt(static_cast<double>(n));
  const double kk = static_cast<double>(k);
  const double log_term = std::log(2.0 / alpha);

  const double inner = 1.0 + std::sqrt(log_term / (2.0 * kk));
  const double first = 2.0 * root_n * inner * inner;
  const double second = root_n * std::max(4.0 / kk * log_term, std::sqrt(32.0 / kk * log_term));
  return std::min(first, second);
}

GumbelReport gumbel_bound(const WeightModel& model, const GumbelConfig& cfg) {
  const std::size_t n = model.dimension();
  GumbelReport r;
  r.theta_ub_hat = gumbel_upper_estimate(model, cfg).mean;
  r.theta_lb_hat = gumbel_lower_estimate(model, cfg).mean;
  r.epsilon_g = gumbel_slack(n, cfg.k, cfg.alpha);
  r.theta_ub = r.theta_ub_hat + r.epsilon_g;
  r.theta_lb = r.theta_lb_hat - r.epsilon_g / static_cast<double>(n);
  return r;
}

}  // namespace wrc
