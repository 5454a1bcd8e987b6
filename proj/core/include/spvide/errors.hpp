#pragma once

#include <stdexcept>
#include <string>

namespace spvide {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on a user-supplied parameter was violated.
class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// A sampled value left the representable range (overflow, NaN) during
/// integration or a trajectory solve.
class NonFiniteState : public Error {
public:
    using Error::Error;
};

/// The per-step 2x2 linear system of a trajectory solve is singular.
class SingularStep : public Error {
public:
    SingularStep(double t, const std::string& detail)
        : Error("singular step at t=" + std::to_string(t) + ": " + detail), t_(t) {}
    double t() const noexcept { return t_; }

private:
    double t_;
};

/// A backward characteristic trace arrived outside the label interval.
class OutOfStrip : public Error {
public:
    using Error::Error;
};

/// Characteristics of the fan cross; the flow is not monotone in the label.
class FanCrossing : public Error {
public:
    using Error::Error;
};

/// A positivity condition (A >= gamma > 0, Q/pi >= sigma > 0) failed in
/// strict validation.
class PositivityViolation : public Error {
public:
    PositivityViolation(std::string function, double t, double x, double value)
        : Error("positivity violation: inf " + function + " = " + std::to_string(value) +
                " at (t=" + std::to_string(t) + ", x=" + std::to_string(x) + ")"),
          function_(std::move(function)), t_(t), x_(x), value_(value) {}

    const std::string& function() const noexcept { return function_; }
    double t() const noexcept { return t_; }
    double x() const noexcept { return x_; }
    double value() const noexcept { return value_; }

private:
    std::string function_;
    double t_, x_, value_;
};

/// The closed-form constant-coefficient oracle hit a double characteristic
/// root (A^2 == 4*eps*B).
class DegenerateRoots : public Error {
public:
    using Error::Error;
};

/// The comparison region G1 = [t0, t_end] is empty (t0 >= t_end).
class RegionEmpty : public Error {
public:
    using Error::Error;
};

/// Too few usable points to fit the boundary-layer decay slope.
class InsufficientDecay : public Error {
public:
    using Error::Error;
};

/// Neighbouring characteristics are too close for cross-label differencing.
class DegenerateSpacing : public Error {
public:
    using Error::Error;
};

/// A problem document violates the JSON schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

}  // namespace spvide
