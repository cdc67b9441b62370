#pragma once

// Output-character distribution of generated targets, tallied per position
// class. The end marker is never counted.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "l2e/sample.hpp"

namespace l2e {

enum class PositionClass : uint8_t { first, interior, pre_terminal, all };
inline constexpr std::array kPositionClasses = {PositionClass::first, PositionClass::interior,
                                                PositionClass::pre_terminal, PositionClass::all};
std::string_view to_string(PositionClass cls) noexcept;

/// Chance of guessing one output character uniformly at random.
inline constexpr double kProgramGuessBaseline = 1.0 / 12.0;
inline constexpr double kMemorizeGuessBaseline = 1.0 / 11.0;

struct CharFrequency {
  char symbol;
  uint64_t count;
  double frequency;
};

class CharDistribution {
 public:
  /// Tallies one target. `first` is its first character, `pre_terminal` the
  /// one right before the end marker, `interior` everything in between.
  void add(std::string_view target);
  void merge(const CharDistribution& other);

  uint64_t count(PositionClass cls, char c) const noexcept {
    return counts_[index(cls)][static_cast<unsigned char>(c)];
  }
  uint64_t total(PositionClass cls) const noexcept { return totals_[index(cls)]; }
  uint64_t samples() const noexcept { return samples_; }
  double frequency(PositionClass cls, char c) const noexcept;
  /// Characters by descending count, ties broken by character.
  std::vector<CharFrequency> ranked(PositionClass cls) const;

 private:
  static std::size_t index(PositionClass cls) noexcept { return static_cast<std::size_t>(cls); }
  std::array<std::array<uint64_t, 256>, 4> counts_{};
  std::array<uint64_t, 4> totals_{};
  uint64_t samples_ = 0;
};

/// Throws UsageError on an empty sample list.
CharDistribution analyze(std::span<const Sample> samples);

/// Aligned table: top characters per class plus the guessing baselines.
std::string format_report(const CharDistribution& dist, int top = 5);
/// Long format: class,char,count,frequency.
std::string format_csv(const CharDistribution& dist);

}  // namespace l2e
