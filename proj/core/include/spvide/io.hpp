#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spvide/analysis.hpp"
#include "spvide/jumps.hpp"
#include "spvide/params.hpp"
#include "spvide/problem.hpp"
#include "spvide/solver.hpp"

namespace spvide {

/// Shortest round-trip decimal form of a double ("2", "0.01", "3.16e-04"
/// style). Deterministic, which keeps CSV/JSON outputs byte-stable across
/// runs and thread counts.
std::string format_double(double v);

/// A problem document: the parsed JSON file driving the CLI. Unknown keys
/// anywhere in the document are rejected (SchemaError).
struct ProblemDocument {
    ProblemSpec spec;
    RunParams params;           // "solver" block merged over defaults
    JumpMode jump_mode = JumpMode::Analytic;  // "jumps" block; default mode "paper"
    std::optional<expr::Expression> delta0_expr, delta_expr;  // custom mode

    /// Builds the jump evaluator for a validated problem.
    JumpModel jump_model(const ValidatedProblem& p) const;
};

/// Loads and schema-checks a problem document. Throws SchemaError for
/// malformed JSON or schema violations and expr::ParseError for bad
/// expression strings.
ProblemDocument load_problem_document(const std::string& path);

/// Trajectory dump, columns: epsilon,label,t,x,z,w (epsilon empty on
/// degenerate rows).
void write_trajectories_csv(const std::string& path,
                            const std::vector<TrajectorySolution>& solutions);

/// Fan dump, columns: t,label,x.
void write_fan_csv(const std::string& path, const CharacteristicFan& fan);

/// Jump dumps: label,delta0 and t,label,delta.
void write_delta0_csv(const std::string& path, const JumpPair& jumps);
void write_delta_csv(const std::string& path, const JumpPair& jumps);

/// Study table, columns:
/// epsilon,t0,sup_y,sup_yt,sup_yx,defect,w_at_t0,ratio.
void write_convergence_csv(const std::string& path, const ConvergenceReport& report);

/// Verdict document: fitted constants, per-clause pass flags and the full
/// row data (including the matching diagnostic).
void write_verdict_json(const std::string& path, const ConvergenceReport& report,
                        JumpMode mode);

const char* jump_mode_name(JumpMode mode);

}  // namespace spvide
