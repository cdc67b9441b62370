#include "l2e/rng.hpp"

namespace l2e {

uint64_t SplitMix64::uniform(uint64_t lo, uint64_t hi) noexcept {
  const uint64_t span = hi - lo;
  if (span == UINT64_MAX) return next();
  const uint64_t range = span + 1;
  unsigned __int128 m = static_cast<unsigned __int128>(next()) * range;
  auto low = static_cast<uint64_t>(m);
  if (low < range) {
    const uint64_t threshold = (0 - range) % range;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(next()) * range;
      low = static_cast<uint64_t>(m);
    }
  }
  return lo + static_cast<uint64_t>(m >> 64);
}

uint64_t derive_seed(uint64_t seed, std::string_view tag, uint64_t index) noexcept {
  return SplitMix64::mix(SplitMix64::mix(seed ^ fnv1a64(tag)) + index * 0x9e3779b97f4a7c15ULL);
}

}  // namespace l2e
