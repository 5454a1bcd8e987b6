#pragma once

// Table of parser/evaluator cases shared by the unit suite and the
// acceptance suite. Value cases are evaluated with the fixed bindings
// t = 1.5, s = 0.25, x = 2; expected values were computed by hand from
// the stated precedence rules.

#include <cstddef>
#include <vector>

namespace parser_cases {

struct ValueCase {
    const char* source;
    double expected;
};

struct ErrorCase {
    const char* source;
    bool unknown_identifier;  // otherwise a plain syntax error
    std::size_t offset;       // expected byte offset of the diagnostic
};

inline const std::vector<ValueCase>& value_cases() {
    static const std::vector<ValueCase> cases = {
        // precedence and grouping
        {"1+2*3", 7.0},
        {"(1+2)*3", 9.0},
        {"10-2*3", 4.0},
        {"2+3*4^2", 50.0},
        {"(1+2)*(3+4)", 21.0},
        {"2*(3+4)^2", 98.0},
        {"1/4", 0.25},
        // associativity
        {"2^3^2", 512.0},
        {"(2^3)^2", 64.0},
        {"2-3-4", -5.0},
        {"100/10/5", 2.0},
        {"6/2*3", 9.0},
        {"1-2+3", 2.0},
        {"2^2^-1", 1.4142135623730951},
        // unary minus against '^' and '*'
        {"-2^2", -4.0},
        {"(-2)^2", 4.0},
        {"2*-3", -6.0},
        {"-2*3", -6.0},
        {"2--3", 5.0},
        {"-(1+2)", -3.0},
        {"--4", 4.0},
        {"2^-2", 0.25},
        {"-abs(-2)^2", -4.0},
        // number literals
        {"1e2", 100.0},
        {"1e+2", 100.0},
        {"1.5e-2", 0.015},
        {"0.125", 0.125},
        {"5.", 5.0},
        // functions
        {"exp(0)", 1.0},
        {"ln(1)", 0.0},
        {"sqrt(16)", 4.0},
        {"abs(-3)", 3.0},
        {"sin(0)", 0.0},
        {"cos(0)", 1.0},
        {"exp(ln(5))", 5.0},
        {"sqrt(2)^2", 2.0},
        {"2^abs(-3)", 8.0},
        {"ln(exp(2))", 2.0},
        // variables (t = 1.5, s = 0.25, x = 2)
        {"t", 1.5},
        {"t + x*s", 2.0},
        {"x^2", 4.0},
        {"-t^2", -2.25},
        {"exp(-t/0.5)", 0.049787068367863944},
        {"t-s-x", -0.75},
        {"2*x^-1", 1.0},
        {"sin(t)^2+cos(t)^2", 1.0},
    };
    return cases;
}

inline const std::vector<ErrorCase>& error_cases() {
    static const std::vector<ErrorCase> cases = {
        {"2x", false, 1},       // no implicit multiplication
        {"1+", false, 2},       // dangling operator
        {"(1+2", false, 4},     // unbalanced parenthesis
        {"1 2", false, 2},      // adjacent operands
        {")", false, 0},        // operand expected
        {"1+*2", false, 2},     // operator where operand expected
        {"sin 1", false, 4},    // function call needs parentheses
        {"", false, 0},         // empty input
        {"1..2", false, 2},     // stray '.'
        {"exp()", false, 4},    // empty argument
        {"@", false, 0},        // unexpected character
        {"foo", true, 0},       // unknown identifier
        {"tan(1)", true, 0},    // unsupported function
        {"y", true, 0},         // unsupported variable
    };
    return cases;
}

}  // namespace parser_cases
