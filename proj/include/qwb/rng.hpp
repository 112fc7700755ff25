#pragma once

#include <cstdint>

namespace qwb {

/// Counter-based generator: draw(i) is a pure function of (seed, i), so any
/// stream position can be reproduced without replaying earlier draws.
class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    // splitmix64 finalizer
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  constexpr std::uint64_t bits(std::uint64_t counter) const noexcept {
    return mix(seed_ + 0x9e3779b97f4a7c15ULL * (counter + 1));
  }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform(std::uint64_t counter) const noexcept {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  /// Sequential interface over the same counter stream.
  double next_uniform() noexcept { return uniform(counter_++); }
  std::uint64_t next_bits() noexcept { return bits(counter_++); }

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace qwb
