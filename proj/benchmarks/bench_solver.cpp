#include <benchmark/benchmark.h>

#include "spvide/analysis.hpp"

using namespace spvide;

namespace {

ValidatedProblem kernel_problem() {
    ProblemSpec spec;
    spec.Q = expr::Expression::parse("1 + 0.5*sin(x)");
    spec.A = expr::Expression::parse("1 + 0.1*t");
    spec.B = expr::Expression::parse("0.5");
    spec.F = expr::Expression::parse("1");
    spec.K0 = expr::Expression::parse("0");
    spec.K1 = expr::Expression::parse("exp(-(t-s))");
    spec.pi0 = expr::Expression::parse("1");
    spec.pi1 = expr::Expression::parse("1 + x");
    return validate(spec);
}

void BM_ExprEval(benchmark::State& state) {
    const expr::Expression e = expr::Expression::parse("exp(-(t-s))*(1 + 0.5*sin(x))");
    double t = 0.9;
    for (auto _ : state) {
        benchmark::DoNotOptimize(e.eval({.t = t, .s = 0.25, .x = 1.5}));
    }
}
BENCHMARK(BM_ExprEval);

void BM_TraceCharacteristic(benchmark::State& state) {
    const ValidatedProblem p = kernel_problem();
    const double step = 1.0 / static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(trace_forward(p, 0.5, step));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_TraceCharacteristic)->Range(256, 4096)->Complexity(benchmark::oN);

// The Volterra history makes one trajectory O(n^2); visible in the scaling.
void BM_PerturbedSolveKernel(benchmark::State& state) {
    const ValidatedProblem p = kernel_problem();
    const Characteristic ch = trace_forward(p, 0.5, 1e-3);
    const double h = 1.0 / static_cast<double>(state.range(0));
    const Mesh mesh = build_mesh(0.05, p.gamma, 1.0, h);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_perturbed(p, ch, 0.05, mesh));
    }
    state.SetComplexityN(static_cast<int64_t>(mesh.size()));
}
BENCHMARK(BM_PerturbedSolveKernel)->Range(64, 512)->Complexity(benchmark::oNSquared);

void BM_DegenerateSolve(benchmark::State& state) {
    const ValidatedProblem p = kernel_problem();
    const Characteristic ch = trace_forward(p, 0.5, 1e-3);
    const Mesh mesh = build_mesh(std::nullopt, p.gamma, 1.0, 1e-2);
    const JumpModel jumps = JumpModel::analytic(p);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_degenerate(p, ch, jumps, mesh));
    }
}
BENCHMARK(BM_DegenerateSolve);

}  // namespace

BENCHMARK_MAIN();
