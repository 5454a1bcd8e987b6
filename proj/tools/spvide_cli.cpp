// Command-line front end: problem validation, single solves, jump
// computation, perturbed/degenerate comparison and convergence studies with
// reproducible file outputs.
//
// Exit codes: 0 success/pass, 1 validation failure, 2 verdict failure,
// 64 input/schema error, 65 numerical failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "spvide/analysis.hpp"
#include "spvide/errors.hpp"
#include "spvide/io.hpp"
#include "spvide/parallel.hpp"

namespace {

namespace fs = std::filesystem;
using namespace spvide;

constexpr int kExitPass = 0;
constexpr int kExitValidation = 1;
constexpr int kExitVerdict = 2;
constexpr int kExitInput = 64;
constexpr int kExitNumerical = 65;

struct GlobalOptions {
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    bool strict = true;
    std::optional<double> h_coarse;
    std::optional<int> fan_size;
    std::optional<double> char_step;
};

struct Loaded {
    ProblemDocument doc;
    ValidatedProblem problem;
};

Loaded load_and_validate(const std::string& file, const GlobalOptions& opts) {
    Loaded l{load_problem_document(file), {}};
    if (opts.h_coarse) l.doc.params.h_coarse = *opts.h_coarse;
    if (opts.fan_size) l.doc.params.fan_size = *opts.fan_size;
    if (opts.char_step) l.doc.params.char_step = *opts.char_step;
    l.problem = validate(l.doc.spec, {}, opts.strict, l.doc.params.char_step);
    for (const std::string& w : l.problem.warnings) std::cerr << "warning: " << w << "\n";
    return l;
}

fs::path prepare_out(const std::string& out_dir) {
    fs::path dir(out_dir);
    fs::create_directories(dir);
    return dir;
}

int cmd_validate(const std::string& file, const GlobalOptions& opts) {
    const Loaded l = load_and_validate(file, opts);
    std::cout << "gamma=" << format_double(l.problem.gamma) << "\n"
              << "sigma=" << format_double(l.problem.sigma) << "\n"
              << "strip=[" << format_double(l.problem.strip_lo.front()) << ","
              << format_double(l.problem.strip_hi.front()) << "]->["
              << format_double(l.problem.strip_lo.back()) << ","
              << format_double(l.problem.strip_hi.back()) << "]\n";
    return kExitPass;
}

int cmd_solve(const std::string& file, double epsilon, const std::string& out_dir,
              const GlobalOptions& opts) {
    const Loaded l = load_and_validate(file, opts);
    const RunParams& params = l.doc.params;
    const CharacteristicFan fan =
        build_fan(l.problem, params.fan_size, params.char_step, opts.threads);
    const Mesh mesh = build_mesh(epsilon, l.problem.gamma, l.problem.spec.t_end, params.h_coarse,
                                 params.layer_factor, params.fine_divisor);

    std::vector<TrajectorySolution> solutions(fan.members.size());
    parallel_for(fan.members.size(), opts.threads, [&](std::size_t m) {
        solutions[m] = solve_perturbed(l.problem, fan.members[m], epsilon, mesh);
    });

    const fs::path dir = prepare_out(out_dir);
    write_trajectories_csv((dir / "trajectories.csv").string(), solutions);
    write_fan_csv((dir / "fan.csv").string(), fan);
    std::cout << "wrote " << (dir / "trajectories.csv").string() << " (" << solutions.size()
              << " trajectories, " << mesh.size() << " nodes each)\n";
    return kExitPass;
}

int cmd_jumps(const std::string& file, const std::string& out_dir, const GlobalOptions& opts) {
    const Loaded l = load_and_validate(file, opts);
    const RunParams& params = l.doc.params;
    const CharacteristicFan fan =
        build_fan(l.problem, params.fan_size, params.char_step, opts.threads);
    const JumpModel model = l.doc.jump_model(l.problem);
    const JumpPair jp = sample_jumps(model, l.problem, fan);
    const double defect = jump_consistency_defect(l.problem, fan, jp);

    const fs::path dir = prepare_out(out_dir);
    write_delta0_csv((dir / "delta0.csv").string(), jp);
    write_delta_csv((dir / "delta.csv").string(), jp);
    std::cout << "mode=" << jump_mode_name(jp.mode) << "\n"
              << "defect=" << format_double(defect) << "\n";
    return kExitPass;
}

void write_compare_csv(const std::string& path, const DifferenceReport& r) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file " + path);
    out << "epsilon,t0,sup_y,sup_yt,sup_yx,defect,w_at_t0,matching_diag\n";
    out << format_double(r.epsilon) << ',' << format_double(r.t0) << ',' << format_double(r.sup_y)
        << ',' << format_double(r.sup_yt) << ',' << format_double(r.sup_yx) << ','
        << format_double(r.defect) << ',' << format_double(r.w_at_t0) << ','
        << format_double(r.matching_diag) << '\n';
}

int cmd_compare(const std::string& file, double epsilon, const std::string& out_dir,
                const GlobalOptions& opts) {
    const Loaded l = load_and_validate(file, opts);
    const RunParams& params = l.doc.params;
    const CharacteristicFan fan =
        build_fan(l.problem, params.fan_size, params.char_step, opts.threads);
    const JumpModel model = l.doc.jump_model(l.problem);
    const JumpPair jp = sample_jumps(model, l.problem, fan);

    const Mesh mesh = build_mesh(epsilon, l.problem.gamma, l.problem.spec.t_end, params.h_coarse,
                                 params.layer_factor, params.fine_divisor);
    const Mesh deg_mesh = build_mesh(std::nullopt, l.problem.gamma, l.problem.spec.t_end,
                                     params.h_coarse, params.layer_factor, params.fine_divisor);

    std::vector<TrajectorySolution> perturbed(fan.members.size());
    std::vector<TrajectorySolution> degenerate(fan.members.size());
    parallel_for(fan.members.size(), opts.threads, [&](std::size_t m) {
        perturbed[m] = solve_perturbed(l.problem, fan.members[m], epsilon, mesh);
        degenerate[m] = solve_degenerate(l.problem, fan.members[m], model, deg_mesh);
    });

    const DifferenceReport report =
        difference_report(l.problem, fan, perturbed, degenerate, jp, epsilon);

    const fs::path dir = prepare_out(out_dir);
    write_trajectories_csv((dir / "perturbed.csv").string(), perturbed);
    write_trajectories_csv((dir / "degenerate.csv").string(), degenerate);
    write_compare_csv((dir / "compare.csv").string(), report);
    std::cout << "epsilon=" << format_double(report.epsilon) << " t0=" << format_double(report.t0)
              << " sup_y=" << format_double(report.sup_y)
              << " sup_yt=" << format_double(report.sup_yt)
              << " sup_yx=" << format_double(report.sup_yx)
              << " defect=" << format_double(report.defect)
              << " w_at_t0=" << format_double(report.w_at_t0)
              << " matching_diag=" << format_double(report.matching_diag) << "\n";
    return kExitPass;
}

int cmd_converge(const std::string& file, std::vector<double> eps, const std::string& out_dir,
                 const GlobalOptions& opts) {
    const Loaded l = load_and_validate(file, opts);
    if (eps.empty()) eps = default_epsilon_ladder();
    const JumpModel model = l.doc.jump_model(l.problem);

    const ConvergenceReport report =
        convergence_study(l.problem, model, eps, l.doc.params, opts.threads);

    const fs::path dir = prepare_out(out_dir);
    write_convergence_csv((dir / "convergence.csv").string(), report);
    write_verdict_json((dir / "verdict.json").string(), report, l.doc.jump_mode);

    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const DifferenceReport& r = report.rows[i];
        std::cout << "epsilon=" << format_double(r.epsilon) << " sup_y=" << format_double(r.sup_y)
                  << " ratio=" << format_double(report.ratio_trend[i])
                  << " matching_diag=" << format_double(r.matching_diag) << "\n";
    }
    std::cout << "fitted_K=" << format_double(report.fitted_K) << "\n"
              << "verdict: " << (report.pass ? "PASS" : "FAIL") << " (y="
              << (report.clause_y.pass ? "pass" : "fail") << ", y_t="
              << (report.clause_yt.pass ? "pass" : "fail") << ", y_x="
              << (report.clause_yx.pass ? "pass" : "fail") << ")\n";
    return report.pass ? kExitPass : kExitVerdict;
}

int cmd_oracle(double A, double B, double F, double pi0, double pi1, double epsilon, double t) {
    const OraclePoint p = solve_oracle_constant(A, B, F, pi0, pi1, epsilon, t);
    std::cout << "z=" << format_double(p.z) << " w=" << format_double(p.w) << "\n";
    return kExitPass;
}

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const expr::ExprError& e) {
        std::cerr << "error: expression " << e.what() << "\n";
        return kExitInput;
    } catch (const PositivityViolation& e) {
        std::cerr << "validation failure: " << e.what() << "\n";
        return kExitValidation;
    } catch (const DegenerateRoots& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const InvalidParameter& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

int run_main(int argc, char** argv) {
    CLI::App app{"Initial-jump solver for singularly perturbed Volterra partial "
                 "integro-differential equations along characteristics"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions opts;
    app.add_option("--threads", opts.threads, "Worker threads (default: available parallelism)");
    app.add_flag("--strict,!--no-strict", opts.strict,
                 "Fail validation on non-positive infima (default: strict)");
    double h_coarse_value = 0;
    auto* h_coarse_opt = app.add_option("--h-coarse", h_coarse_value, "Coarse mesh spacing");
    int fan_size_value = 0;
    auto* fan_size_opt = app.add_option("--fan-size", fan_size_value, "Number of characteristics");
    double char_step_value = 0;
    auto* char_step_opt = app.add_option("--char-step", char_step_value, "Characteristic RK4 step");

    std::string file, out_dir = ".";
    double epsilon = 0.0;
    std::vector<double> eps_list;

    CLI::App* validate_cmd = app.add_subcommand("validate", "Check the standing assumptions");
    validate_cmd->add_option("file", file, "Problem JSON document")->required();

    CLI::App* solve_cmd = app.add_subcommand("solve", "Solve the perturbed problem at one epsilon");
    solve_cmd->add_option("file", file)->required();
    solve_cmd->add_option("--epsilon", epsilon, "Perturbation parameter")->required();
    solve_cmd->add_option("--out", out_dir, "Output directory");

    CLI::App* jumps_cmd = app.add_subcommand("jumps", "Compute the initial jumps");
    jumps_cmd->add_option("file", file)->required();
    jumps_cmd->add_option("--out", out_dir, "Output directory");

    CLI::App* compare_cmd =
        app.add_subcommand("compare", "Compare perturbed and degenerate solutions at one epsilon");
    compare_cmd->add_option("file", file)->required();
    compare_cmd->add_option("--epsilon", epsilon, "Perturbation parameter")->required();
    compare_cmd->add_option("--out", out_dir, "Output directory");

    CLI::App* converge_cmd =
        app.add_subcommand("converge", "Run the epsilon ladder and check the difference bounds");
    converge_cmd->add_option("file", file)->required();
    converge_cmd->add_option("--eps", eps_list, "Comma-separated epsilon ladder")->delimiter(',');
    converge_cmd->add_option("--out", out_dir, "Output directory");

    double oA = 1, oB = 0, oF = 0, oPi0 = 1, oPi1 = 1, oT = 0;
    double oEps = 0.1;
    CLI::App* oracle_cmd =
        app.add_subcommand("oracle", "Closed-form constant-coefficient reference point");
    oracle_cmd->add_option("--A", oA)->required();
    oracle_cmd->add_option("--B", oB)->required();
    oracle_cmd->add_option("--F", oF)->required();
    oracle_cmd->add_option("--pi0", oPi0)->required();
    oracle_cmd->add_option("--pi1", oPi1)->required();
    oracle_cmd->add_option("--epsilon", oEps)->required();
    oracle_cmd->add_option("--t", oT)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    if (opts.threads == 0) opts.threads = 1;
    if (h_coarse_opt->count() > 0) opts.h_coarse = h_coarse_value;
    if (fan_size_opt->count() > 0) opts.fan_size = fan_size_value;
    if (char_step_opt->count() > 0) opts.char_step = char_step_value;

    if (validate_cmd->parsed()) return guarded([&] { return cmd_validate(file, opts); });
    if (solve_cmd->parsed())
        return guarded([&] { return cmd_solve(file, epsilon, out_dir, opts); });
    if (jumps_cmd->parsed()) return guarded([&] { return cmd_jumps(file, out_dir, opts); });
    if (compare_cmd->parsed())
        return guarded([&] { return cmd_compare(file, epsilon, out_dir, opts); });
    if (converge_cmd->parsed())
        return guarded([&] { return cmd_converge(file, eps_list, out_dir, opts); });
    if (oracle_cmd->parsed())
        return guarded([&] { return cmd_oracle(oA, oB, oF, oPi0, oPi1, oEps, oT); });
    return kExitInput;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_main(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "fatal: " << e.what() << "\n";
        return 70;
    }
}
