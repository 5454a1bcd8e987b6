#pragma once

#include <optional>
#include <vector>

#include "spvide/characteristics.hpp"
#include "spvide/problem.hpp"

namespace spvide {

enum class JumpMode { Zero, Analytic, Custom };

/// Evaluates the initial jump of the solution Delta0 and of the integral
/// term Delta at arbitrary points, so the degenerate solver can query them
/// on its own mesh without resampling.
///
///   Zero       both jumps vanish (the naive degenerate problem),
///   Analytic   Delta0 = pi1(psi)/A(0,psi), Delta = Delta0 * K1(t,0,phi),
///   Custom     user-supplied expressions delta0(x0) and delta(t, x) with
///              x evaluated on the characteristic.
class JumpModel {
public:
    static JumpModel zero();
    static JumpModel analytic(const ValidatedProblem& p);
    static JumpModel custom(expr::Expression delta0, expr::Expression delta);

    JumpMode mode() const noexcept { return mode_; }

    /// Delta0 at a characteristic label (= first integral psi).
    double delta0(double label) const;

    /// Delta at time t on the characteristic with the given label, where
    /// x = phi(t; label) is the current position on that characteristic.
    double delta(double t, double x, double label) const;

private:
    JumpMode mode_ = JumpMode::Zero;
    const ValidatedProblem* problem_ = nullptr;
    std::optional<expr::Expression> delta0_expr_, delta_expr_;
};

/// Delta0 and Delta sampled over a fan, for reporting and the consistency
/// defect. delta is stored row-major: delta[k * labels.size() + m] holds
/// the value at (t_grid[k], labels[m]).
struct JumpPair {
    JumpMode mode = JumpMode::Zero;
    std::vector<double> labels;
    std::vector<double> delta0;
    std::vector<double> t;
    std::vector<double> delta;
};

/// Delta0(x0) = pi1(x0) / A(0, x0). The label is the first integral, so no
/// tracing is involved at t = 0.
double compute_delta0(const ValidatedProblem& p, double label);

/// The construction of Delta from Delta0: Delta(t, x0) = Delta0(x0) *
/// K1(t, 0, phi(t; x0)), sampled on the fan grid.
JumpPair compute_delta(const ValidatedProblem& p, const CharacteristicFan& fan,
                       const std::vector<double>& delta0);

/// Samples any JumpModel over the fan grid.
JumpPair sample_jumps(const JumpModel& model, const ValidatedProblem& p,
                      const CharacteristicFan& fan);

/// max over the fan grid of |K1(t,0,phi) * Delta0 - Delta|, the defect term
/// that multiplies the constant in the difference bounds. Zero (to machine
/// precision) for the Analytic construction.
double jump_consistency_defect(const ValidatedProblem& p, const CharacteristicFan& fan,
                               const JumpPair& jumps);

}  // namespace spvide
