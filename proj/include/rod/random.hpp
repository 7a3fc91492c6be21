#pragma once

#include <array>
#include <cstdint>
#include <optional>

namespace rod {

/// xoshiro256** seeded by four splitmix64 outputs of the user seed.
///
/// The stream is pinned so that every randomized result in this library is
/// reproducible bit-for-bit from (input, seed) on a given build.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed);

  std::uint64_t next();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

 private:
  std::array<std::uint64_t, 4> s_{};
};

/// Standard normal deviates from the Box-Muller transform of consecutive
/// uniform pairs (u1, u2). Both outputs of each pair are used, cosine first.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}

  double next();

 private:
  Xoshiro256 rng_;
  std::optional<double> cached_;
};

}  // namespace rod
