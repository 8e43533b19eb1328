#pragma once

#include <cstdint>

namespace bcmg {

/// SplitMix64 step; used only to expand a user seed into generator state.
inline std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// xorshift64* (Vigna 2016): 64-bit state, shifts 12/25/27, multiplier
/// 0x2545F4914F6CDD1D. The state is seeded with splitmix64(seed), so any seed
/// including 0 is valid and the stream is easy to reproduce in other languages.
class Xorshift64Star {
 public:
  explicit Xorshift64Star(std::uint64_t seed = 42) noexcept {
    std::uint64_t s = seed;
    state_ = splitmix64(s);
    if (state_ == 0) state_ = 0x9E3779B97F4A7C15ULL;
  }

  std::uint64_t next() noexcept {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545F4914F6CDD1DULL;
  }

  /// Uniform double in [0,1) from the top 53 bits.
  double uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

 private:
  std::uint64_t state_;
};

}  // namespace bcmg
