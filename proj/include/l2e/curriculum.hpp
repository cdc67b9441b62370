#pragma once

// Difficulty scheduling. `baseline` trains on the target difficulty only,
// `naive` walks length then nesting upward whenever validation accuracy
// stalls, `mix` draws every sample's difficulty uniformly, and `combined`
// takes each sample from `mix` with probability combined_mix_prob and from
// `naive` otherwise.

#include <cstdint>
#include <string_view>
#include <utility>

#include "l2e/rng.hpp"

namespace l2e {

enum class Strategy : uint8_t { baseline, naive, mix, combined };

std::string_view to_string(Strategy strategy) noexcept;
Strategy parse_strategy(std::string_view text);

struct Difficulty {
  int length = 1;
  int nesting = 1;
  bool operator==(const Difficulty&) const = default;
  /// Lexicographic on (nesting, length).
  bool operator<(const Difficulty& o) const noexcept {
    return std::pair(nesting, length) < std::pair(o.nesting, o.length);
  }
};

struct CurriculumConfig {
  int target_length = 1;
  int target_nesting = 1;
  Strategy strategy = Strategy::combined;
  double combined_mix_prob = 0.5;
  int stall_patience = 3;
  double stall_min_delta = 0.001;

  void validate() const;
  Difficulty target() const noexcept { return {target_length, target_nesting}; }
};

struct CurriculumState {
  int current_length = 1;
  int current_nesting = 1;
  double best_val_accuracy = -1.0;
  int evals_since_improvement = 0;
  bool reached_target = false;

  Difficulty current() const noexcept { return {current_length, current_nesting}; }
};

/// Starting state: (1, 1) for naive/combined, the target for baseline/mix.
CurriculumState initial_state(const CurriculumConfig& config);

Difficulty draw_difficulty(const CurriculumConfig& config, const CurriculumState& state, SplitMix64& rng);

/// Records a validation accuracy measured at the current difficulty and
/// advances naive/combined after `stall_patience` evaluations without an
/// improvement larger than `stall_min_delta`.
CurriculumState observe_validation(const CurriculumConfig& config, CurriculumState state,
                                   double val_accuracy);

/// True when observe_validation moved the difficulty.
bool advanced(const CurriculumState& before, const CurriculumState& after) noexcept;

}  // namespace l2e
