#pragma once

#include <cstdint>

namespace cgmin {

/// Portable 64-bit generator used by the instance generators.
///
/// The algorithm is pinned so instances are bit-reproducible across
/// platforms and language bindings:
///   - state initialization: splitmix64 applied to (seed XOR tag * GOLDEN),
///     four outputs seed the state;
///   - stream: xoshiro256++;
///   - uniform doubles take the top 53 bits: (x >> 11) * 2^-53 in [0, 1);
///   - normal deviates use the Box-Muller cosine branch on two fresh
///     uniforms, with u1 mapped to (0, 1].
///
/// Substreams (distinct `tag` values) are independent, so a generated
/// instance does not change when only one of its ingredients is resized.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t tag = 0) noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform on [0, 1).
  double uniform() noexcept;
  /// Uniform integer on [lo, hi] inclusive, via rejection-free modulo on a
  /// 64-bit draw (bias < 2^-53 for the ranges used here).
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) noexcept;
  /// Standard normal deviate.
  double normal() noexcept;

 private:
  std::uint64_t state_[4];
};

} // namespace cgmin
