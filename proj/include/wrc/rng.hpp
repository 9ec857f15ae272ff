#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "wrc/core.hpp"

namespace wrc {

/// Stream families, so that e.g. Gumbel trial i and Rademacher sample i never
/// share a substream.
enum class StreamDomain : std::uint64_t {
  rademacher = 1,
  gumbel_upper = 2,
  gumbel_lower = 3,
  model = 4,
  test = 5,
};

/// Deterministic random stream. Draws are built directly from the 64-bit
/// engine output so sequences are identical across standard libraries.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Independent substream keyed by (seed, domain, index).
  static RandomStream derive(std::uint64_t seed, StreamDomain domain, std::uint64_t index);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform01();
  /// Uniform on the open interval (0, 1).
  double uniform_open01();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  Spin spin();

 private:
  std::mt19937_64 engine_;
  std::uint64_t bits_ = 0;
  int bits_left_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

PerturbationVector sample_rademacher(std::size_t n, RandomStream& rng);

}  // namespace wrc
