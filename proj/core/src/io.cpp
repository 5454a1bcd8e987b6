#include "spvide/io.hpp"

#include <charconv>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "spvide/errors.hpp"

namespace spvide {

using json = nlohmann::ordered_json;

std::string format_double(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

const char* jump_mode_name(JumpMode mode) {
    switch (mode) {
        case JumpMode::Zero: return "zero";
        case JumpMode::Analytic: return "paper";
        case JumpMode::Custom: return "custom";
    }
    return "?";
}

JumpModel ProblemDocument::jump_model(const ValidatedProblem& p) const {
    switch (jump_mode) {
        case JumpMode::Zero: return JumpModel::zero();
        case JumpMode::Analytic: return JumpModel::analytic(p);
        case JumpMode::Custom: return JumpModel::custom(*delta0_expr, *delta_expr);
    }
    return JumpModel::zero();
}

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key))
            throw SchemaError("unknown key \"" + key + "\" in " + where);
    }
}

std::string require_string(const json& obj, const std::string& key) {
    if (!obj.contains(key)) throw SchemaError("missing required key \"" + key + "\"");
    if (!obj[key].is_string()) throw SchemaError("key \"" + key + "\" must be a string");
    return obj[key].get<std::string>();
}

double number_or(const json& obj, const std::string& key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) throw SchemaError("key \"" + key + "\" must be a number");
    return obj[key].get<double>();
}

expr::Expression parse_field(const json& obj, const std::string& key) {
    const std::string text = require_string(obj, key);
    try {
        return expr::Expression::parse(text);
    } catch (const expr::ExprError& e) {
        throw SchemaError("expression \"" + key + "\": " + e.what());
    }
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file " + path);
    return out;
}

}  // namespace

ProblemDocument load_problem_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open problem file " + path);

    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw SchemaError("problem document must be a JSON object");

    reject_unknown_keys(doc,
                        {"Q", "A", "B", "F", "K0", "K1", "pi0", "pi1", "t_end", "x0_min", "x0_max",
                         "solver", "jumps"},
                        "the problem document");

    ProblemDocument out;
    out.spec.Q = parse_field(doc, "Q");
    out.spec.A = parse_field(doc, "A");
    out.spec.B = parse_field(doc, "B");
    out.spec.F = parse_field(doc, "F");
    out.spec.K0 = parse_field(doc, "K0");
    out.spec.K1 = parse_field(doc, "K1");
    out.spec.pi0 = parse_field(doc, "pi0");
    out.spec.pi1 = parse_field(doc, "pi1");
    out.spec.t_end = number_or(doc, "t_end", 1.0);
    out.spec.x0_min = number_or(doc, "x0_min", 0.0);
    out.spec.x0_max = number_or(doc, "x0_max", 1.0);

    if (doc.contains("solver")) {
        const json& s = doc["solver"];
        if (!s.is_object()) throw SchemaError("\"solver\" must be an object");
        reject_unknown_keys(s, {"h_coarse", "fine_divisor", "layer_factor", "fan_size", "char_step"},
                            "the solver block");
        out.params.h_coarse = number_or(s, "h_coarse", out.params.h_coarse);
        out.params.fine_divisor = number_or(s, "fine_divisor", out.params.fine_divisor);
        out.params.layer_factor = number_or(s, "layer_factor", out.params.layer_factor);
        out.params.fan_size =
            static_cast<int>(number_or(s, "fan_size", static_cast<double>(out.params.fan_size)));
        out.params.char_step = number_or(s, "char_step", out.params.char_step);
    }

    if (doc.contains("jumps")) {
        const json& j = doc["jumps"];
        if (!j.is_object()) throw SchemaError("\"jumps\" must be an object");
        reject_unknown_keys(j, {"mode", "delta0_expr", "delta_expr"}, "the jumps block");
        const std::string mode = require_string(j, "mode");
        if (mode == "paper") {
            out.jump_mode = JumpMode::Analytic;
        } else if (mode == "zero") {
            out.jump_mode = JumpMode::Zero;
        } else if (mode == "custom") {
            out.jump_mode = JumpMode::Custom;
            out.delta0_expr = parse_field(j, "delta0_expr");
            out.delta_expr = parse_field(j, "delta_expr");
            if (out.delta0_expr->uses(expr::Var::T) || out.delta0_expr->uses(expr::Var::S))
                throw SchemaError("delta0_expr may reference only x");
            if (out.delta_expr->uses(expr::Var::S))
                throw SchemaError("delta_expr may reference only t and x");
        } else {
            throw SchemaError("jumps mode must be \"paper\", \"zero\" or \"custom\"");
        }
    }
    return out;
}

void write_trajectories_csv(const std::string& path,
                            const std::vector<TrajectorySolution>& solutions) {
    std::ofstream out = open_out(path);
    out << "epsilon,label,t,x,z,w\n";
    for (const TrajectorySolution& s : solutions) {
        const std::string eps = s.epsilon ? format_double(*s.epsilon) : std::string();
        const std::string label = format_double(s.label);
        for (std::size_t j = 0; j < s.mesh.size(); ++j) {
            out << eps << ',' << label << ',' << format_double(s.mesh.nodes[j]) << ','
                << format_double(s.x[j]) << ',' << format_double(s.z[j]) << ','
                << format_double(s.w[j]) << '\n';
        }
    }
}

void write_fan_csv(const std::string& path, const CharacteristicFan& fan) {
    std::ofstream out = open_out(path);
    out << "t,label,x\n";
    for (const Characteristic& c : fan.members) {
        const std::string label = format_double(c.label);
        for (std::size_t k = 0; k < c.t.size(); ++k)
            out << format_double(c.t[k]) << ',' << label << ',' << format_double(c.x[k]) << '\n';
    }
}

void write_delta0_csv(const std::string& path, const JumpPair& jumps) {
    std::ofstream out = open_out(path);
    out << "label,delta0\n";
    for (std::size_t m = 0; m < jumps.labels.size(); ++m)
        out << format_double(jumps.labels[m]) << ',' << format_double(jumps.delta0[m]) << '\n';
}

void write_delta_csv(const std::string& path, const JumpPair& jumps) {
    std::ofstream out = open_out(path);
    out << "t,label,delta\n";
    const std::size_t m_count = jumps.labels.size();
    for (std::size_t k = 0; k < jumps.t.size(); ++k)
        for (std::size_t m = 0; m < m_count; ++m)
            out << format_double(jumps.t[k]) << ',' << format_double(jumps.labels[m]) << ','
                << format_double(jumps.delta[k * m_count + m]) << '\n';
}

void write_convergence_csv(const std::string& path, const ConvergenceReport& report) {
    std::ofstream out = open_out(path);
    out << "epsilon,t0,sup_y,sup_yt,sup_yx,defect,w_at_t0,ratio\n";
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const DifferenceReport& r = report.rows[i];
        out << format_double(r.epsilon) << ',' << format_double(r.t0) << ','
            << format_double(r.sup_y) << ',' << format_double(r.sup_yt) << ','
            << format_double(r.sup_yx) << ',' << format_double(r.defect) << ','
            << format_double(r.w_at_t0) << ',' << format_double(report.ratio_trend[i]) << '\n';
    }
}

void write_verdict_json(const std::string& path, const ConvergenceReport& report, JumpMode mode) {
    const auto clause = [](const ClauseCheck& c) {
        json j;
        j["pass"] = c.pass;
        j["fitted_K"] = c.fitted_K;
        j["max_ratio"] = c.max_ratio;
        j["negligible"] = c.negligible;
        return j;
    };

    json doc;
    doc["jumps_mode"] = jump_mode_name(mode);
    doc["pass"] = report.pass;
    doc["fitted_K"] = report.fitted_K;
    doc["scale"] = report.scale;
    doc["clauses"] = json::object();
    doc["clauses"]["y"] = clause(report.clause_y);
    doc["clauses"]["y"]["trend_ok"] = report.clause_y.trend_ok;
    doc["clauses"]["y_t"] = clause(report.clause_yt);
    doc["clauses"]["y_x"] = clause(report.clause_yx);
    doc["rows"] = json::array();
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const DifferenceReport& r = report.rows[i];
        json row;
        row["epsilon"] = r.epsilon;
        row["t0"] = r.t0;
        row["sup_y"] = r.sup_y;
        row["sup_yt"] = r.sup_yt;
        row["sup_yx"] = r.sup_yx;
        row["defect"] = r.defect;
        row["w_at_t0"] = r.w_at_t0;
        row["ratio"] = report.ratio_trend[i];
        row["matching_diag"] = r.matching_diag;
        doc["rows"].push_back(row);
    }

    std::ofstream out = open_out(path);
    out << doc.dump(2) << '\n';
}

}  // namespace spvide
