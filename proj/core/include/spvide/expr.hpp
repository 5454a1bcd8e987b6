#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spvide/errors.hpp"

namespace spvide::expr {

/// The three variables an expression may reference: time t, the Volterra
/// integration variable s, and the space coordinate x.
enum class Var : std::uint8_t { T, S, X };

enum class BinOp : std::uint8_t { Add, Sub, Mul, Div, Pow };

enum class Func : std::uint8_t { Sin, Cos, Exp, Ln, Sqrt, Abs };

const char* name(Var v);
const char* name(BinOp op);
const char* name(Func f);

/// Values supplied to eval(). A variable left unset yields an EvalError if
/// the expression references it.
struct Bindings {
    std::optional<double> t, s, x;
};

/// Error raised while parsing or evaluating an expression. Carries the byte
/// offset of the offending token or node within the original source text.
class ExprError : public Error {
public:
    ExprError(std::size_t offset, const std::string& message)
        : Error("at byte " + std::to_string(offset) + ": " + message), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class ParseError : public ExprError {
public:
    using ExprError::ExprError;
};

class UnknownIdentifier : public ParseError {
public:
    UnknownIdentifier(std::size_t offset, std::string identifier)
        : ParseError(offset, "unknown identifier '" + identifier + "'"),
          identifier_(std::move(identifier)) {}
    const std::string& identifier() const noexcept { return identifier_; }

private:
    std::string identifier_;
};

class EvalError : public ExprError {
public:
    using ExprError::ExprError;
};

struct Node {
    enum class Kind : std::uint8_t { Constant, Variable, Negate, Binary, Call };

    Kind kind = Kind::Constant;
    double value = 0.0;        // Constant
    Var var = Var::T;          // Variable
    BinOp op = BinOp::Add;     // Binary
    Func func = Func::Sin;     // Call
    std::int32_t a = -1;       // operand of Negate/Call, lhs of Binary
    std::int32_t b = -1;       // rhs of Binary
    std::uint32_t offset = 0;  // byte offset in the source, diagnostics only
};

/// An immutable parsed arithmetic expression over t, s, x.
///
/// Grammar: numbers, the three variables, unary minus, binary + - * / ^,
/// and calls of sin, cos, exp, ln, sqrt, abs. '^' is right-associative and
/// binds tighter than unary minus applied to its base (-2^2 == -4); the
/// remaining binary operators are left-associative with the usual
/// precedence. There is no implicit multiplication.
///
/// Expressions are immutable after parsing and eval() is pure, so a single
/// Expression may be evaluated concurrently from many threads.
class Expression {
public:
    /// The default expression is the literal 0.
    Expression() : nodes_(1), root_(0) {}

    /// Parses source text into an AST. Throws ParseError (with byte offset
    /// and a description of what was expected) or UnknownIdentifier.
    static Expression parse(std::string_view source);

    /// Evaluates the tree in IEEE double precision. Throws EvalError on a
    /// missing binding, division by zero, ln of a non-positive value,
    /// sqrt of a negative value, or a pow() domain violation.
    double eval(const Bindings& bindings) const;

    /// Canonical text form; parse(print()) is structurally identical.
    std::string print() const;

    /// Structural equality, ignoring source offsets.
    bool same_structure(const Expression& other) const;

    /// True when the tree is the single literal 0 (lets solvers skip the
    /// Volterra accumulation for absent kernels).
    bool is_constant_zero() const;

    /// True when any node references the given variable.
    bool uses(Var v) const;

    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    std::int32_t root() const noexcept { return root_; }

private:
    double eval_node(std::int32_t index, const Bindings& bindings) const;

    std::vector<Node> nodes_;
    std::int32_t root_ = -1;

    friend class ExpressionBuilder;
};

/// Test support: assembles an Expression tree node by node, bypassing the
/// parser. Used by generators for round-trip properties.
class ExpressionBuilder {
public:
    std::int32_t constant(double v);
    std::int32_t variable(Var v);
    std::int32_t negate(std::int32_t a);
    std::int32_t binary(BinOp op, std::int32_t a, std::int32_t b);
    std::int32_t call(Func f, std::int32_t a);
    Expression finish(std::int32_t root);

private:
    std::vector<Node> nodes_;
};

}  // namespace spvide::expr
