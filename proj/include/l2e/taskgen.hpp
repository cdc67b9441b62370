#pragma once

// Addition (`print(A+B).`) and memorization (random digit string) samples.

#include <cstdint>
#include <string_view>

#include "l2e/rng.hpp"
#include "l2e/sample.hpp"

namespace l2e {

struct AdditionConfig {
  int length = 1;  // digits per summand, both summands exact
  uint64_t seed = 0;
};

struct MemorizeConfig {
  int length = 1;
  uint64_t seed = 0;
};

inline constexpr int kMaxAdditionLength = 18;
inline constexpr int kMaxMemorizeLength = 4096;

Sample gen_addition(const AdditionConfig& config, SplitMix64& rng);
Sample make_addition(uint64_t lhs, uint64_t rhs);

Sample gen_memorize(const MemorizeConfig& config, SplitMix64& rng);
Sample make_memorize(std::string_view digits);

/// One raw sample of `task` at the given difficulty (nesting is ignored by
/// addition and memorization).
Sample generate_task_sample(Task task, int length, int nesting, SplitMix64& rng);

/// Rejection-samples until the sample's hash split equals `wanted`.
Sample generate_task_sample(Task task, int length, int nesting, SplitMix64& rng, Split wanted,
                            int max_attempts = 100000);

}  // namespace l2e
