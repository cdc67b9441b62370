#include "l2e/taskgen.hpp"

#include <stdexcept>
#include <string>

#include "l2e/bigint.hpp"
#include "l2e/encode.hpp"
#include "l2e/errors.hpp"
#include "l2e/progsynth.hpp"

namespace l2e {

namespace {

uint64_t pow10(int exponent) {
  uint64_t v = 1;
  for (int i = 0; i < exponent; ++i) v *= 10;
  return v;
}

int digit_count(uint64_t v) {
  int n = 1;
  while (v >= 10) {
    v /= 10;
    ++n;
  }
  return n;
}

}  // namespace

Sample make_addition(uint64_t lhs, uint64_t rhs) {
  Sample s;
  s.code = "print(" + std::to_string(lhs) + "+" + std::to_string(rhs) + ")" + kEndMarker;
  s.target = render_target(BigInt(lhs) + BigInt(rhs));
  s.length = digit_count(lhs);
  s.nesting = 1;
  s.task = Task::addition;
  s.split = assign_split(s.code);
  return s;
}

Sample gen_addition(const AdditionConfig& config, SplitMix64& rng) {
  if (config.length < 1 || config.length > kMaxAdditionLength)
    throw UsageError("addition length must be in [1, " + std::to_string(kMaxAdditionLength) + "]");
  const uint64_t lo = pow10(config.length - 1);
  const uint64_t hi = pow10(config.length) - 1;
  const uint64_t a = rng.uniform(lo, hi);
  const uint64_t b = rng.uniform(lo, hi);
  return make_addition(a, b);
}

Sample make_memorize(std::string_view digits) {
  for (char c : digits)
    if (c < '0' || c > '9') throw UsageError("memorization payload must be digits only");
  Sample s;
  s.code = std::string(digits) + kEndMarker;
  s.target = s.code;
  s.length = static_cast<int>(digits.size());
  s.nesting = 1;
  s.task = Task::memorize;
  s.split = assign_split(s.code);
  return s;
}

Sample gen_memorize(const MemorizeConfig& config, SplitMix64& rng) {
  if (config.length < 1 || config.length > kMaxMemorizeLength)
    throw UsageError("memorization length must be in [1, " + std::to_string(kMaxMemorizeLength) +
                     "]");
  std::string digits(static_cast<std::size_t>(config.length), '0');
  for (char& c : digits) c = static_cast<char>('0' + rng.uniform(0, 9));
  return make_memorize(digits);
}

Sample generate_task_sample(Task task, int length, int nesting, SplitMix64& rng) {
  switch (task) {
    case Task::program: return generate(GenConfig{length, nesting, 0}, rng);
    case Task::addition: return gen_addition(AdditionConfig{length, 0}, rng);
    case Task::memorize: return gen_memorize(MemorizeConfig{length, 0}, rng);
  }
  throw std::logic_error("unknown task");
}

Sample generate_task_sample(Task task, int length, int nesting, SplitMix64& rng, Split wanted,
                            int max_attempts) {
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Sample s = generate_task_sample(task, length, nesting, rng);
    if (s.split == wanted) return s;
  }
  throw std::runtime_error("no " + std::string(to_string(task)) + " sample at length " +
                           std::to_string(length) + " landed in split " + std::string(to_string(wanted)));
}

}  // namespace l2e
