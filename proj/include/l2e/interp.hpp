#pragma once

// Parser and evaluator for the generated program subset. Shares no code with
// the generator's value computation.

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "l2e/bigint.hpp"

namespace l2e::interp {

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Literal {
  BigInt value;
};
struct Variable {
  std::string name;
};
struct Binary {
  char op;  // '+', '-', '*'
  ExprPtr lhs, rhs;
};
/// `then_value if lhs cmp rhs else else_value`
struct Conditional {
  ExprPtr then_value;
  char cmp;  // '<' or '>'
  ExprPtr lhs, rhs;
  ExprPtr else_value;
};

struct Expr {
  std::variant<Literal, Variable, Binary, Conditional> node;
};

struct Assign {
  std::string target;
  ExprPtr value;
};
/// `for <counter> in range(count): target op= step` with op '+' or '-'.
struct ForLoop {
  std::string counter;
  ExprPtr count;
  std::string target;
  char op;
  ExprPtr step;
};
struct Print {
  ExprPtr value;
};

using Statement = std::variant<Assign, ForLoop, Print>;

/// Statements in order; the last one is the only Print.
struct Ast {
  std::vector<Statement> statements;
};

/// Accepts newline or ';' separators, inline or indented loop bodies, and
/// requires the trailing end marker. Throws SyntaxError.
Ast parse(std::string_view code);

struct EvalStats {
  uint64_t steps = 0;  // expression nodes visited + loop iterations
};

/// Throws EvalError on an unbound variable or a negative loop count.
BigInt evaluate(const Ast& ast, EvalStats* stats = nullptr);

/// parse + evaluate.
BigInt run(std::string_view code, EvalStats* stats = nullptr);

/// Lexical token count of a program (for step-count bounds).
std::size_t token_count(std::string_view code);

}  // namespace l2e::interp
