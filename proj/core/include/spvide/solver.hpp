#pragma once

#include <optional>
#include <vector>

#include "spvide/characteristics.hpp"
#include "spvide/jumps.hpp"
#include "spvide/mesh.hpp"
#include "spvide/problem.hpp"

namespace spvide {

/// Solution along one characteristic: z = y and w = H[y] restricted to the
/// curve, on the mesh nodes. epsilon == nullopt marks a degenerate
/// (reduced-equation) solution.
struct TrajectorySolution {
    double label = 0.0;
    std::optional<double> epsilon;
    Mesh mesh;
    std::vector<double> x;  // phi(t; label) at the mesh nodes
    std::vector<double> z;
    std::vector<double> w;
};

/// Product-trapezoid state for the Volterra term
///   I(t) = Int_0^t ( K1(t,s,phi(s)) * w(s) + K0(t,s,phi(s)) * z(s) ) ds
/// along one characteristic. Full history is kept and every node is
/// re-weighted at each new upper limit (the kernels depend on t), so one
/// trajectory costs O(n^2) kernel evaluations. Structurally zero kernels
/// are skipped.
class VolterraHistory {
public:
    VolterraHistory(const expr::Expression& K1, const expr::Expression& K0, std::size_t capacity);

    bool active() const noexcept { return !(k1_zero_ && k0_zero_); }

    void push(double t, double x, double z, double w);

    /// Trapezoid quadrature of I(t_new) over the recorded nodes plus the
    /// pending node (t_new, x_new) whose z, w are still unknown:
    ///   I(t_new) = known + coeff_w * w_new + coeff_z * z_new.
    struct Endpoint {
        double known = 0.0, coeff_w = 0.0, coeff_z = 0.0;
    };
    Endpoint open_integral(double t_new, double x_new) const;

    /// Completes the pending node once (z_new, w_new) are solved and caches
    /// the closed integral, which becomes the "old time" value of the next
    /// step.
    double close(const Endpoint& e, double z_new, double w_new) {
        last_closed_ = e.known + e.coeff_w * w_new + e.coeff_z * z_new;
        return last_closed_;
    }
    double last_closed() const noexcept { return last_closed_; }

private:
    const expr::Expression* k1_;
    const expr::Expression* k0_;
    bool k1_zero_, k0_zero_;
    std::vector<double> t_, x_, z_, w_;
    double last_closed_ = 0.0;
};

/// Solves the perturbed problem along one characteristic:
///   z' = w,   eps * w' = -A w - B z + F + I(t),
///   z(0) = pi0(label),  w(0) = pi1(label) / eps,
/// with the implicit trapezoid rule; each step is one closed-form 2x2
/// linear solve (the Volterra endpoint enters the system matrix with
/// weight h/2). A-stable, 2nd order, which is what the stiff layer
/// (eigenvalue ~ -A/eps) requires.
TrajectorySolution solve_perturbed(const ValidatedProblem& p, const Characteristic& ch,
                                   double epsilon, const Mesh& mesh);

/// Solves the jump-corrected degenerate problem along one characteristic:
///   A w + B z = F + Delta(t) + I(t),   z' = w,
///   z(0) = pi0(label) + Delta0(label).
/// The algebraic relation is imposed at the new node together with the
/// trapezoidal advance of z, keeping w an explicit unknown (kernels with
/// K1 under the integral need no differentiation). JumpModel::zero()
/// reproduces the naive degenerate problem.
TrajectorySolution solve_degenerate(const ValidatedProblem& p, const Characteristic& ch,
                                    const JumpModel& jumps, const Mesh& mesh);

struct OraclePoint {
    double z = 0.0, w = 0.0;
};

/// Closed-form reference for constant coefficients and zero kernels:
///   eps z'' + A z' + B z = F,  z(0) = pi0,  eps z'(0) = pi1,
/// via the characteristic roots m = (-A +- sqrt(A^2 - 4 eps B)) / (2 eps).
/// Throws DegenerateRoots when A^2 == 4 eps B; the B == 0 branch uses the
/// linear-in-t particular solution.
OraclePoint solve_oracle_constant(double A, double B, double F, double pi0, double pi1,
                                  double epsilon, double t);

}  // namespace spvide
