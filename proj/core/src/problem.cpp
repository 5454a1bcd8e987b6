#include "spvide/problem.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "spvide/characteristics.hpp"
#include "spvide/errors.hpp"

namespace spvide {

namespace {

struct SampledMin {
    double value = std::numeric_limits<double>::infinity();
    double t = 0.0, x = 0.0;

    void consider(double v, double tt, double xx) {
        if (v < value) {
            value = v;
            t = tt;
            x = xx;
        }
    }
};

void require_vars(const expr::Expression& e, const char* field, bool allow_t, bool allow_s,
                  bool allow_x) {
    if (!allow_t && e.uses(expr::Var::T))
        throw InvalidParameter(std::string(field) + " must not reference variable 't'");
    if (!allow_s && e.uses(expr::Var::S))
        throw InvalidParameter(std::string(field) + " must not reference variable 's'");
    if (!allow_x && e.uses(expr::Var::X))
        throw InvalidParameter(std::string(field) + " must not reference variable 'x'");
}

}  // namespace

ValidatedProblem validate(const ProblemSpec& spec, GridResolution grid, bool strict,
                          double trace_step) {
    if (!(spec.t_end > 0.0)) throw InvalidParameter("t_end must be positive");
    if (!(spec.x0_max > spec.x0_min))
        throw InvalidParameter("label interval [x0_min, x0_max] is degenerate");
    if (grid.nt < 2 || grid.nx < 2) throw InvalidParameter("sampling grid must be at least 2x2");

    require_vars(spec.Q, "Q", true, false, true);
    require_vars(spec.A, "A", true, false, true);
    require_vars(spec.B, "B", true, false, true);
    require_vars(spec.F, "F", true, false, true);
    require_vars(spec.K0, "K0", true, true, true);
    require_vars(spec.K1, "K1", true, true, true);
    require_vars(spec.pi0, "pi0", false, false, true);
    require_vars(spec.pi1, "pi1", false, false, true);

    ValidatedProblem vp;
    vp.spec = spec;
    vp.sample_grid = grid;
    vp.strict = strict;

    // Strip geometry: the characteristics through the interval ends bound
    // the domain G swept by the flow.
    const Characteristic lower = detail::trace_path(spec.Q, spec.x0_min, spec.t_end, trace_step);
    const Characteristic upper = detail::trace_path(spec.Q, spec.x0_max, spec.t_end, trace_step);

    vp.strip_t.resize(static_cast<std::size_t>(grid.nt));
    vp.strip_lo.resize(static_cast<std::size_t>(grid.nt));
    vp.strip_hi.resize(static_cast<std::size_t>(grid.nt));
    for (int i = 0; i < grid.nt; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(grid.nt - 1);
        const double t = spec.t_end * u;
        vp.strip_t[static_cast<std::size_t>(i)] = t;
        vp.strip_lo[static_cast<std::size_t>(i)] = lower.position_at(t);
        vp.strip_hi[static_cast<std::size_t>(i)] = upper.position_at(t);
    }

    SampledMin min_a, min_q, min_pi0, min_pi1;
    for (int i = 0; i < grid.nt; ++i) {
        const double t = vp.strip_t[static_cast<std::size_t>(i)];
        const double lo = vp.strip_lo[static_cast<std::size_t>(i)];
        const double hi = vp.strip_hi[static_cast<std::size_t>(i)];
        for (int j = 0; j < grid.nx; ++j) {
            const double u = static_cast<double>(j) / static_cast<double>(grid.nx - 1);
            const double x = lo + (hi - lo) * u;
            min_a.consider(spec.A.eval({.t = t, .s = std::nullopt, .x = x}), t, x);
            min_q.consider(spec.Q.eval({.t = t, .s = std::nullopt, .x = x}), t, x);
        }
    }
    for (int j = 0; j < grid.nx; ++j) {
        const double u = static_cast<double>(j) / static_cast<double>(grid.nx - 1);
        const double x0 = spec.x0_min + (spec.x0_max - spec.x0_min) * u;
        min_pi0.consider(spec.pi0.eval({.t = std::nullopt, .s = std::nullopt, .x = x0}), 0.0, x0);
        min_pi1.consider(spec.pi1.eval({.t = std::nullopt, .s = std::nullopt, .x = x0}), 0.0, x0);
    }

    vp.gamma = min_a.value;
    vp.sigma = std::min(min_q.value, std::min(min_pi0.value, min_pi1.value));

    const auto report = [&](const char* fn, const SampledMin& m) {
        if (m.value > 0.0) return;
        if (strict) throw PositivityViolation(fn, m.t, m.x, m.value);
        vp.warnings.push_back(std::string("inf ") + fn + " = " + std::to_string(m.value) +
                              " at (t=" + std::to_string(m.t) + ", x=" + std::to_string(m.x) +
                              ") is not positive");
    };
    report("A", min_a);
    report("Q", min_q);
    report("pi0", min_pi0);
    report("pi1", min_pi1);

    return vp;
}

}  // namespace spvide
