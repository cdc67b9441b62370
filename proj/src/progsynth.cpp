#include "l2e/progsynth.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "l2e/encode.hpp"
#include "l2e/errors.hpp"

namespace l2e {

namespace {

constexpr std::string_view kVariableNames = "abcdefghij";

uint64_t pow10(int exponent) {
  uint64_t v = 1;
  for (int i = 0; i < exponent; ++i) v *= 10;
  return v;
}

void append_statements(std::vector<std::string>& into, std::vector<std::string>&& from) {
  for (auto& s : from) into.push_back(std::move(s));
}

class ProgramBuilder {
 public:
  ProgramBuilder(const GenConfig& config, GenChoices& choices)
      : choices_(choices), literal_hi_(pow10(config.length)), small_hi_(config.small_bound()) {}

  void apply(Operation op) {
    switch (op) {
      case Operation::add:
      case Operation::sub: {
        StackEntry lhs = operand();
        StackEntry rhs = operand();
        const char sign = op == Operation::add ? '+' : '-';
        StackEntry out;
        out.value = op == Operation::add ? BigInt(lhs.value + rhs.value) : BigInt(lhs.value - rhs.value);
        out.expr = "(" + lhs.expr + sign + rhs.expr + ")";
        out.statements = std::move(lhs.statements);
        append_statements(out.statements, std::move(rhs.statements));
        stack_.push_back(std::move(out));
        break;
      }
      case Operation::mul: {
        const bool factor_first = choices_.coin();
        StackEntry other = operand();
        const int factor = choices_.small(small_hi_);
        StackEntry out;
        out.value = other.value * factor;
        out.expr = factor_first ? "(" + std::to_string(factor) + "*" + other.expr + ")"
                                : "(" + other.expr + "*" + std::to_string(factor) + ")";
        out.statements = std::move(other.statements);
        stack_.push_back(std::move(out));
        break;
      }
      case Operation::if_else: {
        StackEntry then_branch = operand();
        StackEntry else_branch = operand();
        StackEntry lhs = operand();
        StackEntry rhs = operand();
        const bool less = choices_.coin();
        const bool taken = less ? lhs.value < rhs.value : lhs.value > rhs.value;
        StackEntry out;
        out.value = taken ? then_branch.value : else_branch.value;
        out.expr = "(" + then_branch.expr + " if " + lhs.expr + (less ? "<" : ">") + rhs.expr +
                   " else " + else_branch.expr + ")";
        out.statements = std::move(then_branch.statements);
        append_statements(out.statements, std::move(else_branch.statements));
        append_statements(out.statements, std::move(lhs.statements));
        append_statements(out.statements, std::move(rhs.statements));
        stack_.push_back(std::move(out));
        break;
      }
      case Operation::for_loop: {
        StackEntry init = operand();
        StackEntry step = operand();
        const int range = choices_.small(small_hi_);
        const bool increment = choices_.coin();
        const std::string var(1, fresh_variable());
        StackEntry out;
        // Closed form; the interpreter unrolls the loop instead.
        out.value = increment ? BigInt(init.value + range * step.value) : BigInt(init.value - range * step.value);
        out.expr = var;
        out.statements = std::move(init.statements);
        append_statements(out.statements, std::move(step.statements));
        out.statements.push_back(var + "=" + init.expr);
        out.statements.push_back("for x in range(" + std::to_string(range) + "):\n  " + var +
                                 (increment ? "+=" : "-=") + step.expr);
        stack_.push_back(std::move(out));
        break;
      }
      case Operation::literal: {
        const uint64_t literal = choices_.literal(literal_hi_);
        stack_.push_back(StackEntry{BigInt(literal), {}, std::to_string(literal)});
        break;
      }
      case Operation::assign: {
        StackEntry source = operand();
        const std::string var(1, fresh_variable());
        StackEntry out;
        out.value = source.value;
        out.expr = var;
        out.statements = std::move(source.statements);
        out.statements.push_back(var + "=" + source.expr);
        stack_.push_back(std::move(out));
        break;
      }
    }
  }

  StackEntry finish() {
    StackEntry top = std::move(stack_.back());
    stack_.clear();
    return top;
  }

 private:
  StackEntry operand() {
    if (!stack_.empty() && choices_.reuse_operand()) {
      StackEntry top = std::move(stack_.back());
      stack_.pop_back();
      return top;
    }
    const uint64_t literal = choices_.literal(literal_hi_);
    return StackEntry{BigInt(literal), {}, std::to_string(literal)};
  }

  char fresh_variable() {
    const char name = choices_.variable(names_left_);
    const auto pos = names_left_.find(name);
    if (pos == std::string::npos) throw std::logic_error("variable chooser returned a used name");
    names_left_.erase(pos, 1);
    return name;
  }

  GenChoices& choices_;
  uint64_t literal_hi_;
  int small_hi_;
  std::vector<StackEntry> stack_;
  std::string names_left_{kVariableNames};
};

}  // namespace

void GenConfig::validate() const {
  if (length < 1 || length > kMaxLength)
    throw UsageError("length must be in [1, " + std::to_string(kMaxLength) + "], got " +
                     std::to_string(length));
  if (nesting < 1 || nesting > kMaxNesting)
    throw UsageError("nesting must be in [1, " + std::to_string(kMaxNesting) + "], got " +
                     std::to_string(nesting));
}

Operation RngChoices::operation() {
  return kOperations[rng_.uniform(0, kOperations.size() - 1)];
}

char RngChoices::variable(std::string_view available) {
  return available[rng_.uniform(0, available.size() - 1)];
}

Sample generate(const GenConfig& config, GenChoices& choices) {
  config.validate();
  ProgramBuilder builder(config, choices);
  for (int i = 0; i < config.nesting; ++i) builder.apply(choices.operation());
  StackEntry program = builder.finish();

  std::string code;
  for (const auto& statement : program.statements) {
    code += statement;
    code += '\n';
  }
  code += "print(" + program.expr + ")";
  code += kEndMarker;

  Sample sample;
  sample.target = render_target(program.value);
  sample.split = assign_split(code);
  sample.code = std::move(code);
  sample.length = config.length;
  sample.nesting = config.nesting;
  sample.task = Task::program;
  return sample;
}

Sample generate(const GenConfig& config, SplitMix64& rng) {
  RngChoices choices(rng);
  return generate(config, choices);
}

Split assign_split(std::string_view code) {
  return static_cast<Split>(fnv1a64(code) % 3);
}

Sample generate_in_split(const GenConfig& config, SplitMix64& rng, Split wanted,
                         int max_attempts) {
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Sample s = generate(config, rng);
    if (s.split == wanted) return s;
  }
  throw std::runtime_error("no program landed in split " + std::string(to_string(wanted)) +
                           " after " + std::to_string(max_attempts) + " attempts");
}

Scrambler::Scrambler(std::string_view alphabet, std::string_view image) {
  if (alphabet.size() != image.size())
    throw ConfigError("permutation image has " + std::to_string(image.size()) +
                      " characters, alphabet has " + std::to_string(alphabet.size()));
  forward_.fill(-1);
  std::array<bool, 256> in_alphabet{};
  for (char c : alphabet) in_alphabet[static_cast<unsigned char>(c)] = true;
  std::array<bool, 256> used{};
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    const auto from = static_cast<unsigned char>(alphabet[i]);
    const auto to = static_cast<unsigned char>(image[i]);
    if (forward_[from] != -1) throw ConfigError("alphabet repeats a character");
    if (!in_alphabet[to] || used[to]) throw ConfigError("permutation is not a bijection");
    used[to] = true;
    forward_[from] = to;
  }
}

Scrambler Scrambler::identity(std::string_view alphabet) { return Scrambler(alphabet, alphabet); }

Scrambler Scrambler::random(std::string_view alphabet, SplitMix64& rng) {
  std::string image(alphabet);
  std::string movable;
  for (char c : image)
    if (c != kEndMarker) movable += c;
  for (std::size_t i = movable.size(); i > 1; --i) std::swap(movable[i - 1], movable[rng.uniform(0, i - 1)]);
  std::size_t k = 0;
  for (char& c : image)
    if (c != kEndMarker) c = movable[k++];
  return Scrambler(alphabet, image);
}

std::string Scrambler::apply(std::string_view code) const {
  std::string out(code.size(), '\0');
  for (std::size_t i = 0; i < code.size(); ++i) {
    const int16_t mapped = forward_[static_cast<unsigned char>(code[i])];
    if (mapped < 0)
      throw ConfigError(std::string("character '") + code[i] + "' is outside the alphabet");
    out[i] = static_cast<char>(mapped);
  }
  return out;
}

Scrambler Scrambler::inverse() const {
  Scrambler inv;
  inv.forward_.fill(-1);
  for (int c = 0; c < 256; ++c)
    if (forward_[c] >= 0) inv.forward_[forward_[c]] = static_cast<int16_t>(c);
  return inv;
}

std::string scramble(std::string_view code, const Scrambler& permutation) {
  return permutation.apply(code);
}

}  // namespace l2e
