#pragma once

#include <cstdint>
#include <string_view>

namespace l2e {

/// SplitMix64 (Steele, Lea, Flood 2014). Every random draw in the project goes
/// through this type.
class SplitMix64 {
 public:
  static constexpr std::string_view kName = "splitmix64";

  explicit constexpr SplitMix64(uint64_t seed) noexcept : state_(seed) {}

  constexpr uint64_t next() noexcept {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Independent child stream; advances this generator by one draw.
  SplitMix64 split() noexcept { return SplitMix64(mix(next())); }

  /// Uniform integer in [lo, hi], unbiased (Lemire's multiply-and-reject).
  uint64_t uniform(uint64_t lo, uint64_t hi) noexcept;
  int uniform_int(int lo, int hi) noexcept {
    return static_cast<int>(lo + static_cast<int64_t>(uniform(0, static_cast<uint64_t>(hi - lo))));
  }

  /// Uniform real in [0, 1) with 53 bits of resolution.
  double unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform_real(double lo, double hi) noexcept { return lo + (hi - lo) * unit(); }
  bool coin() noexcept { return (next() >> 63) != 0; }
  bool bernoulli(double p) noexcept { return unit() < p; }

  uint64_t state() const noexcept { return state_; }

  /// Finalizer of SplitMix64, usable as a standalone 64-bit mixer.
  static constexpr uint64_t mix(uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  uint64_t state_;
};

/// Seed for a named sub-stream of a run, e.g. derive_seed(seed, "valid", 3).
uint64_t derive_seed(uint64_t seed, std::string_view tag, uint64_t index = 0) noexcept;

/// 64-bit FNV-1a over raw bytes.
constexpr uint64_t fnv1a64(std::string_view bytes) noexcept {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace l2e
