#pragma once

// Random programs from the restricted subset: integer literals, +, -, *,
// assignment, `A if C1 < C2 else B`, and single-level for-loops, composed
// `nesting` times and ending in one print statement.

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "l2e/bigint.hpp"
#include "l2e/rng.hpp"
#include "l2e/sample.hpp"

namespace l2e {

inline constexpr int kMaxLength = 18;
inline constexpr int kMaxNesting = 10;

struct GenConfig {
  int length = 1;
  int nesting = 1;
  uint64_t seed = 0;

  /// Throws UsageError unless 1 <= length <= kMaxLength and
  /// 1 <= nesting <= kMaxNesting.
  void validate() const;
  /// Bound for the constrained operands (multiplication factor, loop range).
  int small_bound() const noexcept { return 4 * length; }
};

/// A program fragment: statements to run first, then an expression whose
/// value is `value`.
struct StackEntry {
  BigInt value;
  std::vector<std::string> statements;
  std::string expr;
};

/// `literal` pushes a bare fresh literal. Scripted choices only; not part of
/// the random draw.
enum class Operation : uint8_t { add, sub, mul, if_else, for_loop, assign, literal };
/// Operations drawn uniformly by RngChoices.
inline constexpr std::array kOperations = {Operation::add,     Operation::sub,
                                           Operation::mul,     Operation::if_else,
                                           Operation::for_loop, Operation::assign};

/// Source of every random decision made while building a program. The
/// default implementation draws from SplitMix64; tests substitute a scripted
/// one to force specific programs.
class GenChoices {
 public:
  virtual ~GenChoices() = default;
  virtual Operation operation() = 0;
  /// True to pop the stack top for an operand slot (only asked when non-empty).
  virtual bool reuse_operand() = 0;
  virtual uint64_t literal(uint64_t hi) = 0;  // uniform in [1, hi]
  virtual int small(int hi) = 0;              // uniform in [1, hi]
  virtual bool coin() = 0;                    // multiplication side, loop sign, comparison
  virtual char variable(std::string_view available) = 0;
};

class RngChoices final : public GenChoices {
 public:
  explicit RngChoices(SplitMix64& rng) : rng_(rng) {}
  Operation operation() override;
  bool reuse_operand() override { return rng_.coin(); }
  uint64_t literal(uint64_t hi) override { return rng_.uniform(1, hi); }
  int small(int hi) override { return rng_.uniform_int(1, hi); }
  bool coin() override { return rng_.coin(); }
  char variable(std::string_view available) override;

 private:
  SplitMix64& rng_;
};

/// Builds one program and its exact value. `choices` drives every decision.
Sample generate(const GenConfig& config, GenChoices& choices);
Sample generate(const GenConfig& config, SplitMix64& rng);

/// FNV-1a(code) mod 3 -> train / validation / test.
Split assign_split(std::string_view code);

/// Draws samples until one lands in `wanted`. Throws std::runtime_error after
/// `max_attempts` misses (tiny code spaces can leave a split empty).
Sample generate_in_split(const GenConfig& config, SplitMix64& rng, Split wanted,
                         int max_attempts = 100000);

/// Character substitution over the input alphabet.
class Scrambler {
 public:
  /// `image[i]` is the replacement for `alphabet[i]`. Throws ConfigError
  /// unless `image` is a permutation of `alphabet`.
  Scrambler(std::string_view alphabet, std::string_view image);

  static Scrambler identity(std::string_view alphabet);
  /// Random permutation of `alphabet` that keeps the end marker in place.
  static Scrambler random(std::string_view alphabet, SplitMix64& rng);

  /// Throws ConfigError for characters outside the alphabet.
  std::string apply(std::string_view code) const;
  Scrambler inverse() const;

 private:
  Scrambler() = default;
  std::array<int16_t, 256> forward_{};
};

std::string scramble(std::string_view code, const Scrambler& permutation);

}  // namespace l2e
