#pragma once

#include <string>
#include <vector>

#include "spvide/expr.hpp"

namespace spvide {

/// The Cauchy problem data: coefficients, kernels and initial functions of
///
///   eps*H^2[y] + A(t,x)*H[y] + B(t,x)*y
///       = F(t,x) + Int_0^t ( K1(t,s,x)*H[y](s) + K0(t,s,x)*y(s) ) ds,
///   y(0,x) = pi0(x),  eps * y_t(0,x) = pi1(x),
///
/// posed on the strip swept by the characteristics of dx/dt = Q(t,x)
/// through x0 in [x0_min, x0_max] at t = 0.
struct ProblemSpec {
    expr::Expression Q;    // characteristic speed, in (t, x)
    expr::Expression A;    // damping coefficient, in (t, x)
    expr::Expression B;    // reaction coefficient, in (t, x)
    expr::Expression F;    // forcing, in (t, x)
    expr::Expression K0;   // Volterra kernel on y, in (t, s, x)
    expr::Expression K1;   // Volterra kernel on H[y], in (t, s, x)
    expr::Expression pi0;  // initial value, in (x)
    expr::Expression pi1;  // scaled initial derivative, in (x)
    double t_end = 1.0;
    double x0_min = 0.0;
    double x0_max = 1.0;
};

struct GridResolution {
    int nt = 201;
    int nx = 201;
};

/// A ProblemSpec together with the sampled infima gamma (of A) and sigma
/// (of Q, pi0, pi1) over the strip, plus the strip boundary curves at the
/// sampling resolution. Immutable; safe to share across solver workers.
struct ValidatedProblem {
    ProblemSpec spec;
    double gamma = 0.0;
    double sigma = 0.0;
    GridResolution sample_grid;
    bool strict = true;
    std::vector<std::string> warnings;  // non-strict positivity violations

    // Strip geometry: x range [strip_lo[i], strip_hi[i]] at strip_t[i].
    std::vector<double> strip_t, strip_lo, strip_hi;
};

/// Samples A, Q, pi0, pi1 on a tensor grid over the characteristic strip
/// and records the infima. In strict mode a non-positive infimum throws
/// PositivityViolation (naming the function and the sampled minimizer);
/// in non-strict mode it is recorded as a warning. The reported infima are
/// grid minima: refining the grid can only lower them.
ValidatedProblem validate(const ProblemSpec& spec, GridResolution grid = {}, bool strict = true,
                          double trace_step = 1e-3);

}  // namespace spvide
