#include "spvide/characteristics.hpp"

#include <cmath>
#include <string>

#include "spvide/errors.hpp"
#include "spvide/interp.hpp"
#include "spvide/parallel.hpp"

namespace spvide {

namespace {

double rk4_step(const expr::Expression& Q, double t, double x, double h) {
    const auto f = [&](double tt, double xx) {
        return Q.eval({.t = tt, .s = std::nullopt, .x = xx});
    };
    const double k1 = f(t, x);
    const double k2 = f(t + 0.5 * h, x + 0.5 * h * k1);
    const double k3 = f(t + 0.5 * h, x + 0.5 * h * k2);
    const double k4 = f(t + h, x + h * k3);
    return x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

namespace detail {

Characteristic trace_path(const expr::Expression& Q, double x0, double t_end, double step) {
    if (!(step > 0.0)) throw InvalidParameter("trace step must be positive");
    if (!(t_end > 0.0)) throw InvalidParameter("t_end must be positive");

    Characteristic c;
    c.label = x0;
    const auto n_full = static_cast<std::size_t>(t_end / step);
    c.t.reserve(n_full + 2);
    c.x.reserve(n_full + 2);
    c.t.push_back(0.0);
    c.x.push_back(x0);

    double t = 0.0, x = x0;
    for (std::size_t i = 1; i <= n_full; ++i) {
        const double t_next = static_cast<double>(i) * step;
        if (t_next > t_end) break;
        x = rk4_step(Q, t, x, t_next - t);
        t = t_next;
        if (!std::isfinite(x))
            throw NonFiniteState("characteristic trace diverged at t=" + std::to_string(t));
        c.t.push_back(t);
        c.x.push_back(x);
    }
    if (t < t_end) {
        x = rk4_step(Q, t, x, t_end - t);
        if (!std::isfinite(x))
            throw NonFiniteState("characteristic trace diverged at t=" + std::to_string(t_end));
        c.t.push_back(t_end);
        c.x.push_back(x);
    }
    return c;
}

double integrate_to(const expr::Expression& Q, double t_from, double x_from, double t_to,
                    double step) {
    if (!(step > 0.0)) throw InvalidParameter("trace step must be positive");
    const double span = t_to - t_from;
    if (span == 0.0) return x_from;
    const double h = span > 0.0 ? step : -step;
    const auto n_full = static_cast<std::size_t>(std::fabs(span) / step);

    double t = t_from, x = x_from;
    for (std::size_t i = 0; i < n_full; ++i) {
        x = rk4_step(Q, t, x, h);
        t = t_from + static_cast<double>(i + 1) * h;
        if (!std::isfinite(x))
            throw NonFiniteState("characteristic trace diverged at t=" + std::to_string(t));
    }
    if (t != t_to) {
        x = rk4_step(Q, t, x, t_to - t);
        if (!std::isfinite(x))
            throw NonFiniteState("characteristic trace diverged at t=" + std::to_string(t_to));
    }
    return x;
}

}  // namespace detail

double Characteristic::position_at(double tq) const {
    return cubic_interpolate(t, x, tq);
}

Characteristic trace_forward(const ValidatedProblem& p, double x0, double step) {
    const double lo = p.spec.x0_min, hi = p.spec.x0_max;
    const double slack = 1e-12 * std::max(1.0, hi - lo);
    if (x0 < lo - slack || x0 > hi + slack)
        throw InvalidParameter("x0=" + std::to_string(x0) + " outside the label interval [" +
                               std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return detail::trace_path(p.spec.Q, x0, p.spec.t_end, step);
}

double first_integral(const ValidatedProblem& p, double t, double x, double step) {
    if (t < 0.0 || t > p.spec.t_end)
        throw InvalidParameter("first_integral: t outside [0, t_end]");
    const double psi = detail::integrate_to(p.spec.Q, t, x, 0.0, step);
    const double span = p.spec.x0_max - p.spec.x0_min;
    const double tol = 1e-6 * std::max(1.0, span);
    if (psi < p.spec.x0_min - tol || psi > p.spec.x0_max + tol)
        throw OutOfStrip("backward trace from (t=" + std::to_string(t) + ", x=" + std::to_string(x) +
                         ") arrives at x0=" + std::to_string(psi) +
                         ", outside the label interval");
    return psi;
}

CharacteristicFan build_fan(const ValidatedProblem& p, int count, double step, unsigned threads) {
    if (count < 3) throw InvalidParameter("fan size must be at least 3");

    CharacteristicFan fan;
    fan.members.resize(static_cast<std::size_t>(count));
    const double lo = p.spec.x0_min, hi = p.spec.x0_max;
    parallel_for(static_cast<std::size_t>(count), threads, [&](std::size_t m) {
        const double u = static_cast<double>(m) / static_cast<double>(count - 1);
        const double label = lo + (hi - lo) * u;
        fan.members[m] = trace_forward(p, label, step);
    });

    const std::size_t n = fan.members.front().t.size();
    for (std::size_t m = 0; m + 1 < fan.members.size(); ++m) {
        for (std::size_t k = 0; k < n; ++k) {
            if (!(fan.members[m + 1].x[k] > fan.members[m].x[k]))
                throw FanCrossing("characteristics with labels " +
                                  std::to_string(fan.members[m].label) + " and " +
                                  std::to_string(fan.members[m + 1].label) + " cross at t=" +
                                  std::to_string(fan.members[m].t[k]));
        }
    }
    return fan;
}

}  // namespace spvide
