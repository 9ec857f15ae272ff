#include "wrc/core.hpp"

#include <cmath>
#include <utility>

#include "wrc/rng.hpp"

namespace wrc {

State state_from_index(std::uint64_t index, std::size_t n) {
  State x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = ((index >> (n - 1 - i)) & 1U) ? Spin{1} : Spin{-1};
  }
  return x;
}

std::uint64_t index_of(std::span<const Spin> x) {
  std::uint64_t index = 0;
  for (Spin s : x) index = (index << 1) | (s > 0 ? 1U : 0U);
  return index;
}

PerturbationVector::PerturbationVector(std::vector<Spin> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw InvalidDimensionError("perturbation vector must have n >= 1");
  for (Spin s : entries_) {
    if (s != 1 && s != -1) throw InvalidParameterError("perturbation entries must be -1 or +1");
  }
}

int PerturbationVector::dot(std::span<const Spin> x) const {
  if (x.size() != entries_.size()) throw InvalidDimensionError("dot: dimension mismatch");
  int sum = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += entries_[i] * x[i];
  return sum;
}

RealUnaryPerturbation::RealUnaryPerturbation(std::vector<Pair> per_variable)
    : per_variable_(std::move(per_variable)) {
  for (const Pair& p : per_variable_) {
    if (!std::isfinite(p.at_minus) || !std::isfinite(p.at_plus)) {
      throw InvalidParameterError("unary perturbation values must be finite");
    }
  }
}

RealUnaryPerturbation RealUnaryPerturbation::zeros(std::size_t n) {
  return RealUnaryPerturbation(std::vector<Pair>(n, Pair{0.0, 0.0}));
}

double RealUnaryPerturbation::evaluate(std::span<const Spin> x) const {
  if (x.size() != per_variable_.size()) throw InvalidDimensionError("evaluate: dimension mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += value(i, x[i]);
  return sum;
}

RealUnaryPerturbation RealUnaryPerturbation::scaled(double factor) const {
  std::vector<Pair> out(per_variable_.begin(), per_variable_.end());
  for (Pair& p : out) {
    p.at_minus *= factor;
    p.at_plus *= factor;
  }
  return RealUnaryPerturbation(std::move(out));
}

RealUnaryPerturbation to_unary(const PerturbationVector& c) {
  std::vector<RealUnaryPerturbation::Pair> pairs;
  pairs.reserve(c.size());
  for (Spin s : c.entries()) pairs.push_back({-static_cast<double>(s), static_cast<double>(s)});
  return RealUnaryPerturbation(std::move(pairs));
}

OracleResult delta(const WeightModel& model, const PerturbationVector& c) {
  if (c.size() != model.dimension()) throw InvalidDimensionError("delta: dimension mismatch");
  return model.maximize(to_unary(c));
}

void BoundConfig::validate() const {
  if (k < 1) throw InvalidParameterError("k must be >= 1");
  if (resample_limit < 0) throw InvalidParameterError("resample_limit must be >= 0");
}

// ---------------------------------------------------------------------------

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream RandomStream::derive(std::uint64_t seed, StreamDomain domain, std::uint64_t index) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(domain));
  h = splitmix64(h ^ index);
  return RandomStream(h);
}

double RandomStream::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform_open01() {
  for (;;) {
    double u = uniform01();
    if (u > 0.0) return u;
  }
}

Spin RandomStream::spin() {
  if (bits_left_ == 0) {
    bits_ = engine_();
    bits_left_ = 64;
  }
  Spin s = (bits_ & 1U) ? Spin{1} : Spin{-1};
  bits_ >>= 1;
  --bits_left_;
  return s;
}

PerturbationVector sample_rademacher(std::size_t n, RandomStream& rng) {
  if (n == 0) throw InvalidDimensionError("sample_rademacher: n must be >= 1");
  std::vector<Spin> entries(n);
  for (Spin& s : entries) s = rng.spin();
  return PerturbationVector(std::move(entries));
}

}  // namespace wrc
