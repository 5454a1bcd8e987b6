#include "spvide/jumps.hpp"

#include <cmath>

#include "spvide/errors.hpp"

namespace spvide {

JumpModel JumpModel::zero() {
    return JumpModel{};
}

JumpModel JumpModel::analytic(const ValidatedProblem& p) {
    JumpModel m;
    m.mode_ = JumpMode::Analytic;
    m.problem_ = &p;
    return m;
}

JumpModel JumpModel::custom(expr::Expression delta0, expr::Expression delta) {
    JumpModel m;
    m.mode_ = JumpMode::Custom;
    m.delta0_expr_ = std::move(delta0);
    m.delta_expr_ = std::move(delta);
    return m;
}

double JumpModel::delta0(double label) const {
    switch (mode_) {
        case JumpMode::Zero: return 0.0;
        case JumpMode::Analytic: return compute_delta0(*problem_, label);
        case JumpMode::Custom:
            return delta0_expr_->eval({.t = std::nullopt, .s = std::nullopt, .x = label});
    }
    return 0.0;
}

double JumpModel::delta(double t, double x, double label) const {
    switch (mode_) {
        case JumpMode::Zero: return 0.0;
        case JumpMode::Analytic:
            return compute_delta0(*problem_, label) *
                   problem_->spec.K1.eval({.t = t, .s = 0.0, .x = x});
        case JumpMode::Custom: return delta_expr_->eval({.t = t, .s = std::nullopt, .x = x});
    }
    return 0.0;
}

double compute_delta0(const ValidatedProblem& p, double label) {
    const double pi1 = p.spec.pi1.eval({.t = std::nullopt, .s = std::nullopt, .x = label});
    const double a0 = p.spec.A.eval({.t = 0.0, .s = std::nullopt, .x = label});
    if (a0 == 0.0) throw InvalidParameter("A(0, x0) vanishes; the initial jump is undefined");
    return pi1 / a0;
}

JumpPair compute_delta(const ValidatedProblem& p, const CharacteristicFan& fan,
                       const std::vector<double>& delta0) {
    if (delta0.size() != static_cast<std::size_t>(fan.size()))
        throw InvalidParameter("delta0 must be sampled at every fan label");

    JumpPair jp;
    jp.mode = JumpMode::Analytic;
    jp.delta0 = delta0;
    jp.t = fan.t_grid();
    jp.labels.reserve(fan.members.size());
    for (const Characteristic& c : fan.members) jp.labels.push_back(c.label);

    const std::size_t m_count = fan.members.size();
    jp.delta.resize(jp.t.size() * m_count);
    for (std::size_t k = 0; k < jp.t.size(); ++k) {
        for (std::size_t m = 0; m < m_count; ++m) {
            const double phi = fan.members[m].x[k];
            jp.delta[k * m_count + m] =
                delta0[m] * p.spec.K1.eval({.t = jp.t[k], .s = 0.0, .x = phi});
        }
    }
    return jp;
}

JumpPair sample_jumps(const JumpModel& model, const ValidatedProblem& p,
                      const CharacteristicFan& fan) {
    if (model.mode() == JumpMode::Analytic) {
        std::vector<double> delta0;
        delta0.reserve(fan.members.size());
        for (const Characteristic& c : fan.members) delta0.push_back(compute_delta0(p, c.label));
        return compute_delta(p, fan, delta0);
    }

    JumpPair jp;
    jp.mode = model.mode();
    jp.t = fan.t_grid();
    jp.labels.reserve(fan.members.size());
    for (const Characteristic& c : fan.members) jp.labels.push_back(c.label);
    jp.delta0.reserve(fan.members.size());
    for (const Characteristic& c : fan.members) jp.delta0.push_back(model.delta0(c.label));

    const std::size_t m_count = fan.members.size();
    jp.delta.resize(jp.t.size() * m_count);
    for (std::size_t k = 0; k < jp.t.size(); ++k)
        for (std::size_t m = 0; m < m_count; ++m)
            jp.delta[k * m_count + m] =
                model.delta(jp.t[k], fan.members[m].x[k], fan.members[m].label);
    return jp;
}

double jump_consistency_defect(const ValidatedProblem& p, const CharacteristicFan& fan,
                               const JumpPair& jumps) {
    const std::size_t m_count = fan.members.size();
    if (jumps.labels.size() != m_count || jumps.t.size() != fan.t_grid().size())
        throw InvalidParameter("jump samples must live on the fan grid");

    double defect = 0.0;
    for (std::size_t k = 0; k < jumps.t.size(); ++k) {
        for (std::size_t m = 0; m < m_count; ++m) {
            const double phi = fan.members[m].x[k];
            const double k1 = p.spec.K1.eval({.t = jumps.t[k], .s = 0.0, .x = phi});
            defect = std::max(defect,
                              std::fabs(k1 * jumps.delta0[m] - jumps.delta[k * m_count + m]));
        }
    }
    return defect;
}

}  // namespace spvide
