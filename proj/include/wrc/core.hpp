#pragma once

// Shared domain types for weighted-sum bounding: spin states, perturbations,
// the optimization-oracle interface every weight model implements, and the
// report produced by the bound pipeline.
//
// All bound arithmetic is done in log base 2. Natural-log views are derived
// by multiplying with ln 2 at the reporting layer.

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wrc {

inline constexpr double kLn2 = std::numbers::ln2;

/// A spin is -1 or +1.
using Spin = std::int8_t;

/// A configuration x in {-1,1}^n.
using State = std::vector<Spin>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDimensionError : public Error {
 public:
  using Error::Error;
};

class InvalidParameterError : public Error {
 public:
  using Error::Error;
};

/// Raised when a weight function is identically zero; log Z has no bound.
class ZeroWeightError : public Error {
 public:
  using Error::Error;
};

/// Lexicographic state enumeration: index 0 is all -1, and variable 0 is the
/// most significant position, so ascending index order is lexicographic
/// order with -1 < +1.
State state_from_index(std::uint64_t index, std::size_t n);
std::uint64_t index_of(std::span<const Spin> x);

class PerturbationVector {
 public:
  explicit PerturbationVector(std::vector<Spin> entries);

  std::size_t size() const { return entries_.size(); }
  Spin operator[](std::size_t i) const { return entries_[i]; }
  std::span<const Spin> entries() const { return entries_; }

  /// <c, x>
  int dot(std::span<const Spin> x) const;

 private:
  std::vector<Spin> entries_;
};

/// Per-variable unary terms u_i(x_i) added to log2 w(x) before maximizing.
class RealUnaryPerturbation {
 public:
  struct Pair {
    double at_minus;
    double at_plus;
  };

  explicit RealUnaryPerturbation(std::vector<Pair> per_variable);
  static RealUnaryPerturbation zeros(std::size_t n);

  std::size_t size() const { return per_variable_.size(); }
  const Pair& operator[](std::size_t i) const { return per_variable_[i]; }
  std::span<const Pair> per_variable() const { return per_variable_; }

  double value(std::size_t i, Spin s) const {
    return s > 0 ? per_variable_[i].at_plus : per_variable_[i].at_minus;
  }
  double evaluate(std::span<const Spin> x) const;
  RealUnaryPerturbation scaled(double factor) const;

 private:
  std::vector<Pair> per_variable_;
};

/// Unary form of <c, x>: u_i = (-c_i, +c_i).
RealUnaryPerturbation to_unary(const PerturbationVector& c);

struct OracleResult {
  double value;  // log2 units
  State argmax;
};

/// A non-negative weight function over {-1,1}^n equipped with an exact
/// perturbed-maximization oracle.
///
/// maximize(u) returns max_x { sum_i u_i(x_i) + log2 w(x) } together with
/// the lexicographically smallest maximizer. It throws ZeroWeightError when
/// every weight is zero. Implementations are immutable and thread-safe.
class WeightModel {
 public:
  virtual ~WeightModel() = default;

  virtual std::size_t dimension() const = 0;
  virtual OracleResult maximize(const RealUnaryPerturbation& u) const = 0;
  /// log2 w(x); -infinity for zero weight.
  virtual double log2_weight(std::span<const Spin> x) const = 0;

  /// A valid lower bound on log2 of the smallest positive weight, if known.
  virtual std::optional<double> log2_w_min() const { return std::nullopt; }
  /// A valid upper bound on log2 of the largest weight, if known.
  virtual std::optional<double> log2_w_max() const { return std::nullopt; }
};

/// delta(c, w) = max_x { <c,x> + log2 w(x) }.
OracleResult delta(const WeightModel& model, const PerturbationVector& c);

struct BoundConfig {
  static constexpr double kConfidence = 0.95;
  static constexpr int kDefaultResampleLimit = 10;

  std::size_t k = 1;
  std::uint64_t seed = 0;
  int resample_limit = kDefaultResampleLimit;

  void validate() const;
};

struct BoundReport {
  struct LnView {
    double delta_bar;
    double psi_lb;
    double psi_ub;
  };

  std::size_t n = 0;
  std::size_t k = 0;
  double delta_bar = 0.0;
  double slack = 0.0;
  double psi_lb = 0.0;
  double psi_ub = 0.0;
  std::optional<double> lambda_used;
  std::optional<double> beta_opt;
  int resamples_used = 0;
  bool lower_fallback = false;
  bool upper_fallback = false;

  LnView ln_view() const { return {delta_bar * kLn2, psi_lb * kLn2, psi_ub * kLn2}; }
};

}  // namespace wrc
