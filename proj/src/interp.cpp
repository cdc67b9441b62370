#include "l2e/interp.hpp"

#include <map>
#include <utility>

#include "l2e/errors.hpp"
#include "l2e/sample.hpp"

namespace l2e::interp {

namespace {

enum class Tok : uint8_t {
  number,
  ident,
  plus,
  minus,
  star,
  assign,
  plus_assign,
  minus_assign,
  lparen,
  rparen,
  less,
  greater,
  colon,
  newline,
  semicolon,
  end_marker,
  eof,
};

struct Token {
  Tok kind;
  std::string_view text;
  std::size_t pos;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
  auto is_alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  while (i < src.size()) {
    const char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (is_digit(c)) {
      while (i < src.size() && is_digit(src[i])) ++i;
      out.push_back({Tok::number, src.substr(start, i - start), start});
      continue;
    }
    if (is_alpha(c)) {
      while (i < src.size() && (is_alpha(src[i]) || is_digit(src[i]))) ++i;
      out.push_back({Tok::ident, src.substr(start, i - start), start});
      continue;
    }
    const bool eq_next = i + 1 < src.size() && src[i + 1] == '=';
    Tok kind;
    std::size_t width = 1;
    switch (c) {
      case '+': kind = eq_next ? Tok::plus_assign : Tok::plus; width = eq_next ? 2 : 1; break;
      case '-': kind = eq_next ? Tok::minus_assign : Tok::minus; width = eq_next ? 2 : 1; break;
      case '*': kind = Tok::star; break;
      case '=': kind = Tok::assign; break;
      case '(': kind = Tok::lparen; break;
      case ')': kind = Tok::rparen; break;
      case '<': kind = Tok::less; break;
      case '>': kind = Tok::greater; break;
      case ':': kind = Tok::colon; break;
      case '\n': kind = Tok::newline; break;
      case ';': kind = Tok::semicolon; break;
      case kEndMarker: kind = Tok::end_marker; break;
      default: throw SyntaxError(std::string("unexpected character '") + c + "'", i);
    }
    out.push_back({kind, src.substr(start, width), start});
    i += width;
  }
  out.push_back({Tok::eof, {}, src.size()});
  return out;
}

bool is_keyword(std::string_view word) {
  return word == "print" || word == "for" || word == "in" || word == "range" || word == "if" ||
         word == "else";
}

ExprPtr make(auto node) { return std::make_unique<Expr>(Expr{std::move(node)}); }

class Parser {
 public:
  explicit Parser(std::string_view src) : tokens_(lex(src)) {}

  Ast program() {
    Ast ast;
    skip_separators();
    if (at(Tok::eof)) throw SyntaxError("empty program", peek().pos);
    for (;;) {
      ast.statements.push_back(statement());
      if (std::holds_alternative<Print>(ast.statements.back())) break;
      if (!at(Tok::newline) && !at(Tok::semicolon))
        throw SyntaxError("expected statement separator", peek().pos);
      skip_separators();
      if (at(Tok::eof) || at(Tok::end_marker))
        throw SyntaxError("program must end with a print statement", peek().pos);
    }
    skip_separators();
    expect(Tok::end_marker, "expected end marker '.' after print");
    while (at(Tok::newline)) advance();
    if (!at(Tok::eof)) throw SyntaxError("trailing input after end marker", peek().pos);
    return ast;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  bool at(Tok kind) const { return peek().kind == kind; }
  bool at_word(std::string_view word) const { return at(Tok::ident) && peek().text == word; }
  const Token& advance() { return tokens_[pos_++]; }

  const Token& expect(Tok kind, const char* message) {
    if (!at(kind)) throw SyntaxError(message, peek().pos);
    return advance();
  }
  void expect_word(std::string_view word) {
    if (!at_word(word)) throw SyntaxError("expected '" + std::string(word) + "'", peek().pos);
    advance();
  }
  std::string identifier() {
    const Token& t = expect(Tok::ident, "expected identifier");
    if (is_keyword(t.text)) throw SyntaxError("keyword used as identifier", t.pos);
    return std::string(t.text);
  }
  void skip_separators() {
    while (at(Tok::newline) || at(Tok::semicolon)) advance();
  }

  Statement statement() {
    if (at_word("print")) {
      advance();
      expect(Tok::lparen, "expected '(' after print");
      ExprPtr value = expression();
      expect(Tok::rparen, "expected ')' closing print");
      return Print{std::move(value)};
    }
    if (at_word("for")) {
      advance();
      ForLoop loop;
      loop.counter = identifier();
      expect_word("in");
      expect_word("range");
      expect(Tok::lparen, "expected '(' after range");
      loop.count = expression();
      expect(Tok::rparen, "expected ')' closing range");
      expect(Tok::colon, "expected ':' after for header");
      while (at(Tok::newline)) advance();
      if (at_word("for")) throw SyntaxError("nested for-loops are not allowed", peek().pos);
      loop.target = identifier();
      if (at(Tok::plus_assign)) {
        loop.op = '+';
      } else if (at(Tok::minus_assign)) {
        loop.op = '-';
      } else {
        throw SyntaxError("loop body must be '+=' or '-='", peek().pos);
      }
      advance();
      loop.step = expression();
      return loop;
    }
    Assign assign;
    assign.target = identifier();
    expect(Tok::assign, "expected '='");
    assign.value = expression();
    return assign;
  }

  // expression := arith ['if' arith cmp arith 'else' expression]
  ExprPtr expression() {
    ExprPtr value = arith();
    if (!at_word("if")) return value;
    advance();
    Conditional cond;
    cond.then_value = std::move(value);
    cond.lhs = arith();
    if (at(Tok::less)) {
      cond.cmp = '<';
    } else if (at(Tok::greater)) {
      cond.cmp = '>';
    } else {
      throw SyntaxError("expected '<' or '>'", peek().pos);
    }
    advance();
    cond.rhs = arith();
    expect_word("else");
    cond.else_value = expression();
    return make(std::move(cond));
  }

  ExprPtr arith() {
    ExprPtr lhs = term();
    while (at(Tok::plus) || at(Tok::minus)) {
      const char op = advance().kind == Tok::plus ? '+' : '-';
      lhs = make(Binary{op, std::move(lhs), term()});
    }
    return lhs;
  }

  ExprPtr term() {
    ExprPtr lhs = factor();
    while (at(Tok::star)) {
      advance();
      lhs = make(Binary{'*', std::move(lhs), factor()});
    }
    return lhs;
  }

  ExprPtr factor() {
    if (at(Tok::number)) return make(Literal{BigInt(std::string(advance().text))});
    if (at(Tok::lparen)) {
      advance();
      ExprPtr inner = expression();
      expect(Tok::rparen, "expected ')'");
      return inner;
    }
    if (at(Tok::ident)) return make(Variable{identifier()});
    throw SyntaxError("expected number, variable or '('", peek().pos);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

class Evaluator {
 public:
  explicit Evaluator(EvalStats* stats) : stats_(stats) {}

  BigInt run(const Ast& ast) {
    for (const Statement& statement : ast.statements) {
      if (const auto* p = std::get_if<Print>(&statement)) return eval(*p->value);
      if (const auto* a = std::get_if<Assign>(&statement)) {
        env_[a->target] = eval(*a->value);
      } else {
        loop(std::get<ForLoop>(statement));
      }
    }
    throw EvalError("program has no print statement");
  }

 private:
  void tick() {
    if (stats_) ++stats_->steps;
  }

  void loop(const ForLoop& f) {
    const BigInt count = eval(*f.count);
    if (count < 0) throw EvalError("negative loop range");
    const BigInt step = eval(*f.step);
    auto it = env_.find(f.target);
    if (it == env_.end()) throw EvalError("loop updates unbound variable '" + f.target + "'");
    for (BigInt i = 0; i < count; ++i) {
      tick();
      env_[f.counter] = i;
      if (f.op == '+') {
        it->second += step;
      } else {
        it->second -= step;
      }
    }
  }

  BigInt eval(const Expr& e) {
    tick();
    return std::visit([this](const auto& node) { return eval_node(node); }, e.node);
  }

  BigInt eval_node(const Literal& l) { return l.value; }
  BigInt eval_node(const Variable& v) {
    auto it = env_.find(v.name);
    if (it == env_.end()) throw EvalError("unbound variable '" + v.name + "'");
    return it->second;
  }
  BigInt eval_node(const Binary& b) {
    BigInt lhs = eval(*b.lhs);
    BigInt rhs = eval(*b.rhs);
    switch (b.op) {
      case '+': return lhs + rhs;
      case '-': return lhs - rhs;
      default: return lhs * rhs;
    }
  }
  BigInt eval_node(const Conditional& c) {
    const BigInt lhs = eval(*c.lhs);
    const BigInt rhs = eval(*c.rhs);
    const bool taken = c.cmp == '<' ? lhs < rhs : lhs > rhs;
    return eval(taken ? *c.then_value : *c.else_value);
  }

  std::map<std::string, BigInt> env_;
  EvalStats* stats_;
};

}  // namespace

Ast parse(std::string_view code) { return Parser(code).program(); }

BigInt evaluate(const Ast& ast, EvalStats* stats) { return Evaluator(stats).run(ast); }

BigInt run(std::string_view code, EvalStats* stats) { return evaluate(parse(code), stats); }

std::size_t token_count(std::string_view code) { return lex(code).size() - 1; }

}  // namespace l2e::interp
