#pragma once

// Shared fixtures for the unit and acceptance suites.

#include <optional>
#include <string>
#include <vector>

#include "spvide/analysis.hpp"
#include "spvide/io.hpp"

namespace testsupport {

using namespace spvide;

struct ProblemText {
    const char* Q = "1";
    const char* A = "1";
    const char* B = "0";
    const char* F = "0";
    const char* K0 = "0";
    const char* K1 = "0";
    const char* pi0 = "1";
    const char* pi1 = "1";
    double t_end = 1.0;
    double x0_min = 0.0;
    double x0_max = 1.0;
};

inline ProblemSpec spec_of(const ProblemText& p) {
    ProblemSpec s;
    s.Q = expr::Expression::parse(p.Q);
    s.A = expr::Expression::parse(p.A);
    s.B = expr::Expression::parse(p.B);
    s.F = expr::Expression::parse(p.F);
    s.K0 = expr::Expression::parse(p.K0);
    s.K1 = expr::Expression::parse(p.K1);
    s.pi0 = expr::Expression::parse(p.pi0);
    s.pi1 = expr::Expression::parse(p.pi1);
    s.t_end = p.t_end;
    s.x0_min = p.x0_min;
    s.x0_max = p.x0_max;
    return s;
}

inline ValidatedProblem make_validated(const ProblemText& p, bool strict = true,
                                       GridResolution grid = {}) {
    return validate(spec_of(p), grid, strict);
}

struct CompareRun {
    CharacteristicFan fan;
    JumpPair jumps;
    std::vector<TrajectorySolution> perturbed;
    std::vector<TrajectorySolution> degenerate;
    DifferenceReport report;
};

/// One epsilon of the compare pipeline: fan, jump sampling, both solves and
/// the difference report.
inline CompareRun run_compare(const ValidatedProblem& p, double eps, const JumpModel& model,
                              const RunParams& params) {
    CompareRun run;
    run.fan = build_fan(p, params.fan_size, params.char_step);
    run.jumps = sample_jumps(model, p, run.fan);
    const Mesh mesh = build_mesh(eps, p.gamma, p.spec.t_end, params.h_coarse, params.layer_factor,
                                 params.fine_divisor);
    const Mesh deg_mesh = build_mesh(std::nullopt, p.gamma, p.spec.t_end, params.h_coarse,
                                     params.layer_factor, params.fine_divisor);
    for (const Characteristic& c : run.fan.members) {
        run.perturbed.push_back(solve_perturbed(p, c, eps, mesh));
        run.degenerate.push_back(solve_degenerate(p, c, model, deg_mesh));
    }
    run.report = difference_report(p, run.fan, run.perturbed, run.degenerate, run.jumps, eps);
    return run;
}

}  // namespace testsupport
