#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "parser_cases.hpp"
#include "spvide/expr.hpp"

using namespace spvide::expr;

namespace {

double eval_text(const char* src, Bindings b = {.t = 1.5, .s = 0.25, .x = 2.0}) {
    return Expression::parse(src).eval(b);
}

}  // namespace

TEST_CASE("value table: precedence, associativity, literals, functions") {
    for (const auto& c : parser_cases::value_cases()) {
        CAPTURE(c.source);
        CHECK(eval_text(c.source) == doctest::Approx(c.expected).epsilon(1e-12));
    }
}

TEST_CASE("error table: positions and kinds") {
    for (const auto& c : parser_cases::error_cases()) {
        CAPTURE(c.source);
        try {
            Expression::parse(c.source);
            FAIL_CHECK("expected a parse error for: " << c.source);
        } catch (const UnknownIdentifier& e) {
            CHECK(c.unknown_identifier);
            CHECK(e.offset() == c.offset);
        } catch (const ParseError& e) {
            CHECK_FALSE(c.unknown_identifier);
            CHECK(e.offset() == c.offset);
        }
    }
}

TEST_CASE("spec examples") {
    CHECK(eval_text("1+2*3") == 7.0);
    CHECK(eval_text("(1+2)*3") == 9.0);
    CHECK(eval_text("2^3^2") == 512.0);
    CHECK(eval_text("exp(0)", {}) == 1.0);
    // e^{-1} with t bound to 0.5
    CHECK(eval_text("exp(-t/0.5)", {.t = 0.5}) ==
          doctest::Approx(0.36787944117144233).epsilon(1e-15));
    CHECK(eval_text("t + x*s", {.t = 1.0, .s = 3.0, .x = 2.0}) == 7.0);
}

TEST_CASE("eval errors carry the offending node position") {
    CHECK_THROWS_AS(eval_text("1/(t-1.5)"), EvalError);       // division by zero
    CHECK_THROWS_AS(eval_text("ln(0)"), EvalError);
    CHECK_THROWS_AS(eval_text("ln(-1)"), EvalError);
    CHECK_THROWS_AS(eval_text("sqrt(-4)"), EvalError);
    CHECK_THROWS_AS(eval_text("(-2)^0.5"), EvalError);        // pow domain
    CHECK_THROWS_AS(eval_text("t", Bindings{}), EvalError);   // missing binding

    try {
        eval_text("1 + ln(0)");
    } catch (const EvalError& e) {
        CHECK(e.offset() == 4);  // the ln call site
    }
    try {
        eval_text("s", Bindings{.t = 1.0});
    } catch (const EvalError& e) {
        CHECK(std::string(e.what()).find("'s'") != std::string::npos);
    }
}

TEST_CASE("determinism: repeated eval is bit-identical") {
    const Expression e = Expression::parse("sin(t)*exp(-x/3) + s^2/7");
    const Bindings b{.t = 0.7853981, .s = 1.1, .x = 0.33};
    const double first = e.eval(b);
    for (int i = 0; i < 100; ++i) {
        const double again = e.eval(b);
        CHECK(std::memcmp(&first, &again, sizeof(double)) == 0);
    }
}

namespace {

// Grammar-directed random AST generator. Constants are kept non-negative
// (a negative literal prints as unary minus and would change the tree).
std::int32_t gen_node(ExpressionBuilder& builder, std::mt19937& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 4);
    std::uniform_real_distribution<double> value(0.0, 10.0);
    std::uniform_int_distribution<int> var(0, 2);
    std::uniform_int_distribution<int> op(0, 4);
    std::uniform_int_distribution<int> fn(0, 5);
    switch (pick(rng)) {
        case 0: return builder.constant(value(rng));
        case 1: return builder.variable(static_cast<Var>(var(rng)));
        case 2: return builder.negate(gen_node(builder, rng, depth - 1));
        case 3: {
            auto lhs = gen_node(builder, rng, depth - 1);
            auto rhs = gen_node(builder, rng, depth - 1);
            return builder.binary(static_cast<BinOp>(op(rng)), lhs, rhs);
        }
        default: return builder.call(static_cast<Func>(fn(rng)), gen_node(builder, rng, depth - 1));
    }
}

}  // namespace

TEST_CASE("property: parse(print(ast)) is structurally identical") {
    std::mt19937 rng(20240817);
    for (int i = 0; i < 300; ++i) {
        ExpressionBuilder builder;
        const Expression original = builder.finish(gen_node(builder, rng, 5));
        const std::string text = original.print();
        CAPTURE(text);
        const Expression reparsed = Expression::parse(text);
        CHECK(original.same_structure(reparsed));
        // and the canonical form is a fixed point
        CHECK(reparsed.print() == text);
    }
}

TEST_CASE("property: random operator chains always parse") {
    std::mt19937 rng(7);
    const char* ops = "+-*/^";
    std::uniform_int_distribution<int> op(0, 4);
    std::uniform_int_distribution<int> digit(1, 9);
    for (int i = 0; i < 200; ++i) {
        std::string src = std::to_string(digit(rng));
        for (int k = 0; k < 6; ++k) {
            src += ops[static_cast<std::size_t>(op(rng))];
            src += std::to_string(digit(rng));
        }
        CAPTURE(src);
        CHECK_NOTHROW(Expression::parse(src));
    }
}

TEST_CASE("variable usage and structural helpers") {
    const Expression e = Expression::parse("t + x");
    CHECK(e.uses(Var::T));
    CHECK(e.uses(Var::X));
    CHECK_FALSE(e.uses(Var::S));
    CHECK(Expression::parse("0").is_constant_zero());
    CHECK_FALSE(Expression::parse("0+0").is_constant_zero());
    CHECK(Expression{}.is_constant_zero());
}
