#include <doctest.h>

#include "../common/listing_examples.hpp"
#include "l2e/encode.hpp"
#include "l2e/errors.hpp"
#include "l2e/interp.hpp"
#include "l2e/progsynth.hpp"

using namespace l2e;

TEST_SUITE("interp") {
  TEST_CASE("literal print parses to a single print statement") {
    const interp::Ast ast = interp::parse("print(6652).");
    REQUIRE(ast.statements.size() == 1);
    const auto& p = std::get<interp::Print>(ast.statements[0]);
    const auto& lit = std::get<interp::Literal>(p.value->node);
    CHECK(lit.value == 6652);
  }

  TEST_CASE("assignment then print") {
    const interp::Ast ast = interp::parse("c=2060\nprint((c-4387)).");
    REQUIRE(ast.statements.size() == 2);
    const auto& a = std::get<interp::Assign>(ast.statements[0]);
    CHECK(a.target == "c");
    CHECK(std::get<interp::Literal>(a.value->node).value == 2060);
    const auto& p = std::get<interp::Print>(ast.statements[1]);
    const auto& bin = std::get<interp::Binary>(p.value->node);
    CHECK(bin.op == '-');
    CHECK(std::get<interp::Variable>(bin.lhs->node).name == "c");
    CHECK(interp::evaluate(ast) == -2327);
  }

  TEST_CASE("semicolon separators are accepted") {
    CHECK(interp::run("c=2060;\nprint((c-4387)).") == -2327);
    CHECK(interp::run("c=2060;print((c-4387)).") == -2327);
  }

  TEST_CASE("known programs") {
    CHECK(interp::run("j=8584\nfor x in range(8):\n  j+=920\nb=(1500+j)\nprint((b+7567)).") == 25011);
    CHECK(interp::run("i=8827\nc=(i-5347)\nprint((c+8704) if 2641<8500 else 5308).") == 12184);
    CHECK(interp::run("e=1079\nfor x in range(10):\n  e+=4729\nprint(e).") == 48369);
    CHECK(interp::run("print((5997-738)).") == 5259);
  }

  TEST_CASE("every transcribed listing evaluates to its target") {
    for (const auto& l : l2e::testing::kListings) {
      INFO(l.code);
      CHECK(render_target(interp::run(l.code)) == std::string(l.target) + ".");
    }
  }

  TEST_CASE("syntax errors carry a position") {
    CHECK_THROWS_AS(interp::parse(""), SyntaxError);
    CHECK_THROWS_AS(interp::parse("print(1)"), SyntaxError);     // no end marker
    CHECK_THROWS_AS(interp::parse("a=1\n."), SyntaxError);       // no print
    CHECK_THROWS_AS(interp::parse("print(1).\nprint(2)."), SyntaxError);
    CHECK_THROWS_AS(interp::parse("print((1+2)."), SyntaxError);
    CHECK_THROWS_AS(interp::parse("print(1<2)."), SyntaxError);
    CHECK_THROWS_AS(interp::parse("a=1\nfor x in range(2):\n  for y in range(2):\n    a+=1\nprint(a)."),
                    SyntaxError);
    try {
      interp::parse("print(1$2).");
      FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
      CHECK(e.position() == 7);
    }
  }

  TEST_CASE("unbound variables fail at evaluation") {
    const interp::Ast ast = interp::parse("print((q+1)).");
    CHECK_THROWS_AS(interp::evaluate(ast), EvalError);
  }

  TEST_CASE("arbitrary precision") {
    CHECK(interp::run("print((99999999999999999999*99999999999999999999)).") ==
          BigInt("9999999999999999999800000000000000000001"));
  }

  TEST_CASE("loop unrolling equals the closed form on random loops") {
    SplitMix64 rng(8);
    for (int i = 0; i < 1000; ++i) {
      const uint64_t init = rng.uniform(1, 100000);
      const uint64_t step = rng.uniform(1, 100000);
      const int range = rng.uniform_int(1, 40);
      const bool inc = rng.coin();
      const std::string code = "v=" + std::to_string(init) + "\nfor x in range(" + std::to_string(range) +
                               "):\n  v" + (inc ? "+=" : "-=") + std::to_string(step) + "\nprint(v).";
      const BigInt closed = inc ? BigInt(init) + BigInt(range) * step : BigInt(init) - BigInt(range) * step;
      REQUIRE(interp::run(code) == closed);
    }
  }

  TEST_CASE("evaluation steps are linear in tokens plus loop ranges") {
    SplitMix64 rng(12);
    for (int nesting = 1; nesting <= 4; ++nesting)
      for (int i = 0; i < 300; ++i) {
        const Sample s = generate(GenConfig{4, nesting, 0}, rng);
        interp::EvalStats stats;
        interp::run(s.code, &stats);
        // Every for-loop range is at most 4 * length.
        const std::size_t bound = 2 * (interp::token_count(s.code) + static_cast<std::size_t>(nesting) * 16);
        REQUIRE(stats.steps <= bound);
      }
  }
}
