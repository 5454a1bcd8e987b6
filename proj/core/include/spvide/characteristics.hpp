#pragma once

#include <vector>

#include "spvide/problem.hpp"

namespace spvide {

/// One characteristic curve x = phi(t; x0) of dx/dt = Q(t,x), traced on a
/// fixed time grid. The label is the first integral psi: the x-coordinate
/// at t = 0.
struct Characteristic {
    double label = 0.0;
    std::vector<double> t;  // strictly increasing, t[0] = 0, t.back() = t_end
    std::vector<double> x;  // phi(t[i]; label)

    /// Dense output between trace nodes by local cubic interpolation,
    /// consistent with the 4th-order trace accuracy.
    double position_at(double tq) const;
};

/// A family of characteristics with labels uniformly spaced over the label
/// interval, all sharing one time grid. Members are ordered by label and
/// never cross.
struct CharacteristicFan {
    std::vector<Characteristic> members;
    const std::vector<double>& t_grid() const { return members.front().t; }
    int size() const { return static_cast<int>(members.size()); }
};

/// Traces dx/dt = Q forward from (0, x0) to t_end with the classical
/// 4th-order one-step method at fixed step (last step shortened to land on
/// t_end exactly). Global error O(step^4) for smooth Q.
Characteristic trace_forward(const ValidatedProblem& p, double x0, double step);

/// First integral psi(t, x): integrates the characteristic equation
/// backward from (t, x) to t = 0 and returns the arrival x-coordinate.
/// Throws OutOfStrip if the result leaves the label interval by more than
/// a small tolerance.
double first_integral(const ValidatedProblem& p, double t, double x, double step);

/// Builds `count` >= 3 characteristics with uniformly spaced labels, traced
/// in parallel and assembled in label order. Verifies the no-crossing
/// invariant on every shared time node.
CharacteristicFan build_fan(const ValidatedProblem& p, int count, double step,
                            unsigned threads = 1);

namespace detail {

/// Raw path trace used before a ValidatedProblem exists (problem validation
/// needs the strip geometry). Returns the node-wise path over the fixed
/// grid of `trace_forward`.
Characteristic trace_path(const expr::Expression& Q, double x0, double t_end, double step);

/// Integrates dx/dt = Q from (t_from, x_from) to t_to (either direction)
/// and returns the terminal x.
double integrate_to(const expr::Expression& Q, double t_from, double x_from, double t_to,
                    double step);

}  // namespace detail

}  // namespace spvide
