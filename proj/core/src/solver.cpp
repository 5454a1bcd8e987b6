#include "spvide/solver.hpp"

#include <cmath>
#include <string>

#include "spvide/errors.hpp"

namespace spvide {

VolterraHistory::VolterraHistory(const expr::Expression& K1, const expr::Expression& K0,
                                 std::size_t capacity)
    : k1_(&K1), k0_(&K0), k1_zero_(K1.is_constant_zero()), k0_zero_(K0.is_constant_zero()) {
    if (active()) {
        t_.reserve(capacity);
        x_.reserve(capacity);
        z_.reserve(capacity);
        w_.reserve(capacity);
    }
}

void VolterraHistory::push(double t, double x, double z, double w) {
    if (!active()) return;
    t_.push_back(t);
    x_.push_back(x);
    z_.push_back(z);
    w_.push_back(w);
}

VolterraHistory::Endpoint VolterraHistory::open_integral(double t_new, double x_new) const {
    Endpoint e;
    if (!active()) return e;

    // Trapezoid weights on the s-grid {t_0, ..., t_k, t_new}.
    const std::size_t k = t_.size() - 1;
    for (std::size_t i = 0; i <= k; ++i) {
        const double left = i == 0 ? t_[0] : t_[i - 1];
        const double right = i == k ? t_new : t_[i + 1];
        const double weight = 0.5 * (right - left);
        double f = 0.0;
        if (!k1_zero_) f += k1_->eval({.t = t_new, .s = t_[i], .x = x_[i]}) * w_[i];
        if (!k0_zero_) f += k0_->eval({.t = t_new, .s = t_[i], .x = x_[i]}) * z_[i];
        e.known += weight * f;
    }
    const double w_end = 0.5 * (t_new - t_[k]);
    if (!k1_zero_) e.coeff_w = w_end * k1_->eval({.t = t_new, .s = t_new, .x = x_new});
    if (!k0_zero_) e.coeff_z = w_end * k0_->eval({.t = t_new, .s = t_new, .x = x_new});
    return e;
}

namespace {

struct CoefficientRow {
    double a, b, f;
};

CoefficientRow coefficients(const ProblemSpec& spec, double t, double x) {
    const expr::Bindings tx{.t = t, .s = std::nullopt, .x = x};
    return {spec.A.eval(tx), spec.B.eval(tx), spec.F.eval(tx)};
}

void check_finite(double z, double w, double t, double label) {
    if (!std::isfinite(z) || !std::isfinite(w))
        throw NonFiniteState("trajectory diverged at t=" + std::to_string(t) +
                             " (label=" + std::to_string(label) + ")");
}

constexpr double kSingularTol = 1e-12;

}  // namespace

TrajectorySolution solve_perturbed(const ValidatedProblem& p, const Characteristic& ch,
                                   double epsilon, const Mesh& mesh) {
    if (!(epsilon > 0.0)) throw InvalidParameter("epsilon must be positive");

    const std::size_t n = mesh.size();
    TrajectorySolution sol;
    sol.label = ch.label;
    sol.epsilon = epsilon;
    sol.mesh = mesh;
    sol.x.resize(n);
    sol.z.resize(n);
    sol.w.resize(n);
    for (std::size_t j = 0; j < n; ++j) sol.x[j] = ch.position_at(mesh.nodes[j]);

    const expr::Bindings at_label{.t = std::nullopt, .s = std::nullopt, .x = ch.label};
    sol.z[0] = p.spec.pi0.eval(at_label);
    sol.w[0] = p.spec.pi1.eval(at_label) / epsilon;

    VolterraHistory history(p.spec.K1, p.spec.K0, n);
    history.push(mesh.nodes[0], sol.x[0], sol.z[0], sol.w[0]);

    CoefficientRow old = coefficients(p.spec, mesh.nodes[0], sol.x[0]);
    double integral_old = 0.0;  // I(0) = 0

    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double t_new = mesh.nodes[j + 1];
        const double h = t_new - mesh.nodes[j];
        const CoefficientRow now = coefficients(p.spec, t_new, sol.x[j + 1]);
        const VolterraHistory::Endpoint vol = history.open_integral(t_new, sol.x[j + 1]);

        // Trapezoid for z' = w and eps w' = -A w - B z + F + I(t); the
        // unknowns (z,w) at the new node satisfy a 2x2 linear system.
        const double g = h / (2.0 * epsilon);
        const double a11 = 1.0, a12 = -0.5 * h;
        const double a21 = g * (now.b - vol.coeff_z);
        const double a22 = 1.0 + g * (now.a - vol.coeff_w);
        const double r1 = sol.z[j] + 0.5 * h * sol.w[j];
        const double r2 = sol.w[j] + g * (-old.a * sol.w[j] - old.b * sol.z[j] + old.f +
                                          integral_old + now.f + vol.known);

        const double det = a11 * a22 - a12 * a21;
        if (std::fabs(det) < kSingularTol)
            throw SingularStep(t_new, "perturbed step matrix is singular (det=" +
                                          std::to_string(det) + ")");
        const double z_new = (r1 * a22 - a12 * r2) / det;
        const double w_new = (a11 * r2 - a21 * r1) / det;
        check_finite(z_new, w_new, t_new, ch.label);

        sol.z[j + 1] = z_new;
        sol.w[j + 1] = w_new;
        history.push(t_new, sol.x[j + 1], z_new, w_new);
        integral_old = history.close(vol, z_new, w_new);
        old = now;
    }
    return sol;
}

TrajectorySolution solve_degenerate(const ValidatedProblem& p, const Characteristic& ch,
                                    const JumpModel& jumps, const Mesh& mesh) {
    const std::size_t n = mesh.size();
    TrajectorySolution sol;
    sol.label = ch.label;
    sol.epsilon = std::nullopt;
    sol.mesh = mesh;
    sol.x.resize(n);
    sol.z.resize(n);
    sol.w.resize(n);
    for (std::size_t j = 0; j < n; ++j) sol.x[j] = ch.position_at(mesh.nodes[j]);

    const expr::Bindings at_label{.t = std::nullopt, .s = std::nullopt, .x = ch.label};
    const double delta0 = jumps.delta0(ch.label);
    sol.z[0] = p.spec.pi0.eval(at_label) + delta0;

    // w(0) from the algebraic relation at t = 0 (the integral vanishes).
    CoefficientRow row = coefficients(p.spec, 0.0, sol.x[0]);
    if (std::fabs(row.a) < kSingularTol)
        throw SingularStep(0.0, "A(0, x0) is numerically zero in the degenerate solve");
    sol.w[0] = (row.f + jumps.delta(0.0, sol.x[0], ch.label) - row.b * sol.z[0]) / row.a;
    check_finite(sol.z[0], sol.w[0], 0.0, ch.label);

    VolterraHistory history(p.spec.K1, p.spec.K0, n);
    history.push(mesh.nodes[0], sol.x[0], sol.z[0], sol.w[0]);

    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double t_new = mesh.nodes[j + 1];
        const double h = t_new - mesh.nodes[j];
        row = coefficients(p.spec, t_new, sol.x[j + 1]);
        const VolterraHistory::Endpoint vol = history.open_integral(t_new, sol.x[j + 1]);

        // Impose A w + B z = F + Delta + I at the new node together with
        // the trapezoidal advance of z.
        const double a11 = 1.0, a12 = -0.5 * h;
        const double a21 = row.b - vol.coeff_z;
        const double a22 = row.a - vol.coeff_w;
        const double r1 = sol.z[j] + 0.5 * h * sol.w[j];
        const double r2 = row.f + jumps.delta(t_new, sol.x[j + 1], ch.label) + vol.known;

        const double det = a11 * a22 - a12 * a21;
        if (std::fabs(det) < kSingularTol)
            throw SingularStep(t_new, "degenerate step matrix is singular (det=" +
                                          std::to_string(det) + ")");
        const double z_new = (r1 * a22 - a12 * r2) / det;
        const double w_new = (a11 * r2 - a21 * r1) / det;
        check_finite(z_new, w_new, t_new, ch.label);

        sol.z[j + 1] = z_new;
        sol.w[j + 1] = w_new;
        history.push(t_new, sol.x[j + 1], z_new, w_new);
        history.close(vol, z_new, w_new);
    }
    return sol;
}

OraclePoint solve_oracle_constant(double A, double B, double F, double pi0, double pi1,
                                  double epsilon, double t) {
    if (!(epsilon > 0.0)) throw InvalidParameter("epsilon must be positive");
    if (!(A > 0.0)) throw InvalidParameter("the oracle requires A > 0");

    if (B == 0.0) {
        // z' = v with eps v' + A v = F: v relaxes to F/A at rate A/eps.
        const double v_inf = F / A;
        const double v0 = pi1 / epsilon;
        const double decay = std::exp(-A * t / epsilon);
        OraclePoint out;
        out.w = v_inf + (v0 - v_inf) * decay;
        out.z = pi0 + v_inf * t + epsilon / A * (v0 - v_inf) * (1.0 - decay);
        return out;
    }

    const double disc = A * A - 4.0 * epsilon * B;
    if (std::fabs(disc) <= 1e-14 * (A * A + std::fabs(4.0 * epsilon * B)))
        throw DegenerateRoots("A^2 == 4*eps*B: double characteristic root");

    const double zp = F / B;
    if (disc > 0.0) {
        const double root = std::sqrt(disc);
        const double m_plus = (-A + root) / (2.0 * epsilon);
        const double m_minus = (-A - root) / (2.0 * epsilon);
        const double c_total = pi0 - zp;
        const double c_plus = (pi1 / epsilon - m_minus * c_total) / (m_plus - m_minus);
        const double c_minus = c_total - c_plus;
        const double e_plus = std::exp(m_plus * t);
        const double e_minus = std::exp(m_minus * t);
        return {c_plus * e_plus + c_minus * e_minus + zp,
                c_plus * m_plus * e_plus + c_minus * m_minus * e_minus};
    }

    // Complex roots: z = e^{alpha t} (c1 cos(beta t) + c2 sin(beta t)) + zp.
    const double alpha = -A / (2.0 * epsilon);
    const double beta = std::sqrt(-disc) / (2.0 * epsilon);
    const double c1 = pi0 - zp;
    const double c2 = (pi1 / epsilon - alpha * c1) / beta;
    const double ea = std::exp(alpha * t);
    const double cb = std::cos(beta * t), sb = std::sin(beta * t);
    return {ea * (c1 * cb + c2 * sb) + zp,
            ea * ((alpha * c1 + beta * c2) * cb + (alpha * c2 - beta * c1) * sb)};
}

}  // namespace spvide
