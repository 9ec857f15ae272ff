#include "wrc/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

namespace wrc {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Unary sums over all 2^n indices as H[high bits] + L[low bits].
struct SplitSums {
  std::size_t low_bits;
  std::vector<double> high;
  std::vector<double> low;

  SplitSums(const RealUnaryPerturbation& u, std::size_t n) : low_bits(n / 2) {
    const std::size_t high_bits = n - low_bits;
    high = table(u, 0, high_bits);
    low = table(u, high_bits, low_bits);
  }

  double at(std::uint64_t index) const {
    return high[index >> low_bits] + low[index & ((std::uint64_t{1} << low_bits) - 1)];
  }

  // Variables [first, first + count), the first one most significant.
  static std::vector<double> table(const RealUnaryPerturbation& u, std::size_t first, std::size_t count) {
    std::vector<double> sums{0.0};
    for (std::size_t v = first; v < first + count; ++v) {
      std::vector<double> next(sums.size() * 2);
      for (std::size_t p = 0; p < sums.size(); ++p) {
        next[2 * p] = sums[p] + u[v].at_minus;
        next[2 * p + 1] = sums[p] + u[v].at_plus;
      }
      sums = std::move(next);
    }
    return sums;
  }
};

std::uint64_t mask_of(const PerturbationVector& c) { return index_of(c.entries()); }

}  // namespace

double log_sum_exp(std::span<const double> values) {
  double peak = kNegInf;
  for (double v : values) peak = std::max(peak, v);
  if (peak == kNegInf) return kNegInf;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - peak);
  return peak + std::log(sum);
}

TabularWeightModel::TabularWeightModel(std::size_t n, std::vector<double> weights) : n_(n) {
  if (n == 0 || n > kMaxDimension) {
    throw InvalidDimensionError("tabular model: n must lie in [1, " + std::to_string(kMaxDimension) + "]");
  }
  if (weights.size() != (std::size_t{1} << n)) throw InvalidDimensionError("tabular model: expected 2^n weights");
  log2_w_.resize(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] >= 0.0) || !std::isfinite(weights[i])) {
      throw InvalidParameterError("tabular model: weights must be finite and non-negative");
    }
    log2_w_[i] = weights[i] > 0.0 ? std::log2(weights[i]) : kNegInf;
  }
  finish();
}

TabularWeightModel TabularWeightModel::from_log2(std::size_t n, std::vector<double> log2_weights) {
  if (n == 0 || n > kMaxDimension) {
    throw InvalidDimensionError("tabular model: n must lie in [1, " + std::to_string(kMaxDimension) + "]");
  }
  if (log2_weights.size() != (std::size_t{1} << n)) throw InvalidDimensionError("tabular model: expected 2^n weights");
  for (double v : log2_weights) {
    if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) {
      throw InvalidParameterError("tabular model: log weights must be finite or -inf");
    }
  }
  TabularWeightModel m;
  m.n_ = n;
  m.log2_w_ = std::move(log2_weights);
  m.finish();
  return m;
}

void TabularWeightModel::finish() {
  log2_w_min_ = std::numeric_limits<double>::infinity();
  log2_w_max_ = kNegInf;
  for (double v : log2_w_) {
    if (v == kNegInf) continue;
    log2_w_min_ = std::min(log2_w_min_, v);
    log2_w_max_ = std::max(log2_w_max_, v);
  }
  if (log2_w_max_ == kNegInf) throw ZeroWeightError("tabular model: all weights are zero");
}

double TabularWeightModel::log2_weight(std::span<const Spin> x) const {
  if (x.size() != n_) throw InvalidDimensionError("log2_weight: dimension mismatch");
  return log2_w_[index_of(x)];
}

OracleResult TabularWeightModel::maximize(const RealUnaryPerturbation& u) const {
  if (u.size() != n_) throw InvalidDimensionError("tabular oracle: perturbation dimension mismatch");
  const SplitSums sums(u, n_);
  double best = kNegInf;
  std::uint64_t arg = 0;
  for (std::uint64_t idx = 0; idx < log2_w_.size(); ++idx) {
    if (log2_w_[idx] == kNegInf) continue;
    const double v = sums.at(idx) + log2_w_[idx];
    if (v > best) {
      best = v;
      arg = idx;
    }
  }
  return {best, state_from_index(arg, n_)};
}

TabularWeightModel TabularWeightModel::scaled(double a) const {
  if (!(a > 0.0) || !std::isfinite(a)) throw InvalidParameterError("scaled: factor must be positive and finite");
  const double shift = std::log2(a);
  std::vector<double> shifted(log2_w_);
  for (double& v : shifted) {
    if (v != kNegInf) v += shift;
  }
  return from_log2(n_, std::move(shifted));
}

double brute_force_log2_Z(const TabularWeightModel& model) {
  const auto w = model.log2_weights();
  double peak = kNegInf;
  for (double v : w) peak = std::max(peak, v);
  if (peak == kNegInf) throw ZeroWeightError("brute_force_log2_Z: all weights are zero");
  double sum = 0.0;
  for (double v : w) {
    if (v != kNegInf) sum += std::exp2(v - peak);
  }
  return peak + std::log2(sum);
}

// <c,x> = n - 2 * popcount(c xor x) on index bitmasks.
std::pair<double, State> brute_force_delta(const TabularWeightModel& model, const PerturbationVector& c) {
  const std::size_t n = model.dimension();
  if (c.size() != n) throw InvalidDimensionError("brute_force_delta: dimension mismatch");
  const auto w = model.log2_weights();
  const std::uint64_t cmask = mask_of(c);
  double best = kNegInf;
  std::uint64_t arg = 0;
  for (std::uint64_t idx = 0; idx < w.size(); ++idx) {
    if (w[idx] == kNegInf) continue;
    const int dot = static_cast<int>(n) - 2 * std::popcount(cmask ^ idx);
    const double v = dot + w[idx];
    if (v > best) {
      best = v;
      arg = idx;
    }
  }
  if (best == kNegInf) throw ZeroWeightError("brute_force_delta: all weights are zero");
  return {best, state_from_index(arg, n)};
}

double exact_weighted_rademacher(const TabularWeightModel& model) {
  const std::size_t n = model.dimension();
  if (n > 12) throw InvalidDimensionError("exact_weighted_rademacher: n must be <= 12");
  const auto w = model.log2_weights();

  std::vector<std::uint64_t> support;
  for (std::uint64_t idx = 0; idx < w.size(); ++idx) {
    if (w[idx] != kNegInf) support.push_back(idx);
  }
  if (support.empty()) throw ZeroWeightError("exact_weighted_rademacher: all weights are zero");

  double total = 0.0;
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t cmask = 0; cmask < count; ++cmask) {
    double best = kNegInf;
    for (std::uint64_t idx : support) {
      const double v = static_cast<double>(static_cast<int>(n) - 2 * std::popcount(cmask ^ idx)) + w[idx];
      best = std::max(best, v);
    }
    total += best;
  }
  return total / static_cast<double>(count);
}

// Column transfer with one spin added per step. The frontier holds the
// latest spin of every row (bit a = row a); adding spin (a, b) sums out the
// frontier's old occupant (a, b - 1).
double grid_exact_ln_Z(const GridIsingModel& model) {
  const bool transpose = model.rows() > model.cols();
  const std::size_t height = transpose ? model.cols() : model.rows();
  const std::size_t width = transpose ? model.rows() : model.cols();
  if (height > 20) throw InvalidDimensionError("grid_exact_ln_Z: smaller grid side must be <= 20");

  const std::size_t cols = model.cols();
  // Frontier coordinates: a = position within the column, b = column.
  auto node_at = [&](std::size_t a, std::size_t b) { return transpose ? b * cols + a : a * cols + b; };

  std::vector<double> along_b(height * width, 0.0);  // (a,b)-(a,b+1)
  std::vector<double> along_a(height * width, 0.0);  // (a,b)-(a+1,b)
  {
    std::vector<std::pair<std::size_t, std::size_t>> coord(model.dimension());
    for (std::size_t b = 0; b < width; ++b) {
      for (std::size_t a = 0; a < height; ++a) coord[node_at(a, b)] = {a, b};
    }
    for (const Coupling& cp : model.couplings()) {
      auto [a1, b1] = coord[cp.i];
      auto [a2, b2] = coord[cp.j];
      if (a1 == a2) {
        along_b[a1 * width + std::min(b1, b2)] = cp.theta;
      } else {
        along_a[std::min(a1, a2) * width + b1] = cp.theta;
      }
    }
  }

  const auto fields = model.theta_local();
  const std::size_t states = std::size_t{1} << height;
  std::vector<double> msg(states, 0.0);
  std::vector<double> next(states);
  auto spin = [](std::size_t s, std::size_t bit) { return ((s >> bit) & 1U) ? 1.0 : -1.0; };

  for (std::size_t b = 0; b < width; ++b) {
    for (std::size_t a = 0; a < height; ++a) {
      const double field = fields[node_at(a, b)];
      const double up = a > 0 ? along_a[(a - 1) * width + b] : 0.0;
      const double left = b > 0 ? along_b[a * width + (b - 1)] : 0.0;
      const std::size_t bit = std::size_t{1} << a;
      for (std::size_t s = 0; s < states; ++s) {
        const double x = spin(s, a);
        double local = field * x;
        if (a > 0) local += up * x * spin(s, a - 1);
        double incoming;
        if (b == 0) {
          incoming = msg[s & ~bit];
        } else {
          const double from_minus = msg[s & ~bit] - left * x;
          const double from_plus = msg[s | bit] + left * x;
          const double hi = std::max(from_minus, from_plus);
          incoming = hi + std::log(std::exp(from_minus - hi) + std::exp(from_plus - hi));
        }
        next[s] = incoming + local;
      }
      std::swap(msg, next);
    }
  }
  return log_sum_exp(msg);
}

TabularWeightModel random_tabular(std::size_t n, RandomStream& rng) {
  const std::size_t size = std::size_t{1} << n;
  std::vector<double> w(size, kNegInf);
  switch (rng.next_u64() % 4) {
    case 0:
      for (double& v : w) v = rng.uniform(-4.0, 4.0);
      break;
    case 1: {
      const double keep = rng.uniform(0.05, 0.5);
      for (double& v : w) {
        if (rng.uniform01() < keep) v = rng.uniform(-2.0, 2.0);
      }
      break;
    }
    case 2: {
      const std::uint64_t center = rng.next_u64() & (size - 1);
      const double slope = rng.uniform(0.0, 2.0);
      for (std::uint64_t idx = 0; idx < size; ++idx) {
        w[idx] = -slope * std::popcount(idx ^ center) + rng.uniform(-0.5, 0.5);
      }
      break;
    }
    default: {
      const double keep = rng.uniform(0.01, 0.6);
      for (double& v : w) {
        if (rng.uniform01() < keep) v = 0.0;
      }
      break;
    }
  }
  if (std::all_of(w.begin(), w.end(), [](double v) { return v == kNegInf; })) {
    w[rng.next_u64() & (size - 1)] = 0.0;
  }
  return TabularWeightModel::from_log2(n, std::move(w));
}

}  // namespace wrc
