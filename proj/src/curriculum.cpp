#include "l2e/curriculum.hpp"

#include <string>

#include "l2e/errors.hpp"

namespace l2e {

std::string_view to_string(Strategy strategy) noexcept {
  switch (strategy) {
    case Strategy::baseline: return "baseline";
    case Strategy::naive: return "naive";
    case Strategy::mix: return "mix";
    case Strategy::combined: return "combined";
  }
  return "?";
}

Strategy parse_strategy(std::string_view text) {
  if (text == "baseline") return Strategy::baseline;
  if (text == "naive") return Strategy::naive;
  if (text == "mix") return Strategy::mix;
  if (text == "combined") return Strategy::combined;
  throw UsageError("unknown strategy '" + std::string(text) + "' (expected baseline|naive|mix|combined)");
}

void CurriculumConfig::validate() const {
  if (target_length < 1 || target_nesting < 1) throw UsageError("target length and nesting must be >= 1");
  if (!(combined_mix_prob >= 0.0 && combined_mix_prob <= 1.0))
    throw UsageError("combined_mix_prob must be in [0, 1]");
  if (stall_patience < 1) throw UsageError("stall_patience must be >= 1");
  if (!(stall_min_delta >= 0.0)) throw UsageError("stall_min_delta must be >= 0");
}

CurriculumState initial_state(const CurriculumConfig& config) {
  config.validate();
  CurriculumState s;
  if (config.strategy == Strategy::baseline || config.strategy == Strategy::mix) {
    s.current_length = config.target_length;
    s.current_nesting = config.target_nesting;
  }
  s.reached_target = s.current() == config.target();
  return s;
}

namespace {

Difficulty mix_draw(const CurriculumConfig& config, SplitMix64& rng) {
  const int length = rng.uniform_int(1, config.target_length);
  const int nesting = rng.uniform_int(1, config.target_nesting);
  return {length, nesting};
}

}  // namespace

Difficulty draw_difficulty(const CurriculumConfig& config, const CurriculumState& state, SplitMix64& rng) {
  switch (config.strategy) {
    case Strategy::baseline: return config.target();
    case Strategy::naive: return state.current();
    case Strategy::mix: return mix_draw(config, rng);
    case Strategy::combined:
      if (rng.bernoulli(config.combined_mix_prob)) return mix_draw(config, rng);
      return state.current();
  }
  return config.target();
}

CurriculumState observe_validation(const CurriculumConfig& config, CurriculumState state,
                                   double val_accuracy) {
  if (val_accuracy > state.best_val_accuracy + config.stall_min_delta) {
    state.best_val_accuracy = val_accuracy;
    state.evals_since_improvement = 0;
  } else {
    ++state.evals_since_improvement;
  }
  const bool schedules = config.strategy == Strategy::naive || config.strategy == Strategy::combined;
  if (!schedules || state.evals_since_improvement < config.stall_patience) return state;
  if (state.current() == config.target()) {
    state.reached_target = true;
    return state;
  }
  if (state.current_length < config.target_length) {
    ++state.current_length;
  } else {
    state.current_length = 1;
    ++state.current_nesting;
  }
  // Progress is measured afresh at the new difficulty.
  state.best_val_accuracy = -1.0;
  state.evals_since_improvement = 0;
  if (state.current() == config.target()) state.reached_target = true;
  return state;
}

bool advanced(const CurriculumState& before, const CurriculumState& after) noexcept {
  return !(before.current() == after.current());
}

}  // namespace l2e
