#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support.hpp"

using namespace testsupport;

TEST_CASE("delta0 is the quotient pi1/A at t = 0") {
    ProblemText text;
    text.pi1 = "2";
    text.A = "4";
    const ValidatedProblem p = make_validated(text);
    CHECK(compute_delta0(p, 0.3) == 0.5);

    ProblemText zero;
    zero.pi1 = "0";
    const ValidatedProblem pz = make_validated(zero, false);
    CHECK(compute_delta0(pz, 0.7) == 0.0);

    ProblemText varying;
    varying.pi1 = "1 + x";
    varying.A = "2 + t";
    const ValidatedProblem pv = make_validated(varying);
    CHECK(compute_delta0(pv, 0.5) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("delta sampling follows K1 along the characteristic") {
    SUBCASE("zero kernel gives zero delta") {
        ProblemText text;
        const ValidatedProblem p = make_validated(text);
        const CharacteristicFan fan = build_fan(p, 3, 1e-3);
        const JumpPair jp = compute_delta(p, fan, {0.5, 0.5, 0.5});
        for (double d : jp.delta) CHECK(d == 0.0);
    }

    SUBCASE("constant kernel copies delta0") {
        ProblemText text;
        text.K1 = "1";
        const ValidatedProblem p = make_validated(text);
        const CharacteristicFan fan = build_fan(p, 3, 1e-3);
        const JumpPair jp = compute_delta(p, fan, {0.5, 0.5, 0.5});
        for (double d : jp.delta) CHECK(d == 0.5);
    }

    SUBCASE("time-decaying kernel at t = 1") {
        ProblemText text;
        text.K1 = "exp(-t)";
        const ValidatedProblem p = make_validated(text);
        const CharacteristicFan fan = build_fan(p, 5, 1e-3);  // labels 0, .25, .5, .75, 1
        std::vector<double> delta0(5, 0.5);
        const JumpPair jp = compute_delta(p, fan, delta0);
        const std::size_t last = jp.t.size() - 1;
        CHECK(jp.t[last] == 1.0);
        CHECK(jp.delta[last * 5 + 1] == doctest::Approx(0.5 * std::exp(-1.0)).epsilon(1e-14));
    }
}

TEST_CASE("consistency defect") {
    SUBCASE("paper construction is exact") {
        ProblemText text;
        text.K1 = "exp(-(t-s))";
        text.pi1 = "1 + x";
        const ValidatedProblem p = make_validated(text);
        const CharacteristicFan fan = build_fan(p, 5, 1e-3);
        const JumpPair jp = sample_jumps(JumpModel::analytic(p), p, fan);
        CHECK(jump_consistency_defect(p, fan, jp) <= 1e-14);
    }

    SUBCASE("zero jumps against a constant kernel") {
        ProblemText text;
        text.K1 = "1";
        text.pi1 = "0.5";  // delta0 would be 0.5, but jumps are zero
        const ValidatedProblem p = make_validated(text);
        const CharacteristicFan fan = build_fan(p, 3, 1e-3);
        JumpPair jp = sample_jumps(JumpModel::zero(), p, fan);
        jp.delta0.assign(jp.delta0.size(), 0.5);  // defect of the withheld jump
        CHECK(jump_consistency_defect(p, fan, jp) == 0.5);
    }

    SUBCASE("zero jumps against K1 = t peak at t_end") {
        ProblemText text;
        text.K1 = "t";
        const ValidatedProblem p = make_validated(text);
        const CharacteristicFan fan = build_fan(p, 3, 1e-3);
        JumpPair jp = sample_jumps(JumpModel::zero(), p, fan);
        jp.delta0.assign(jp.delta0.size(), 1.0);
        CHECK(jump_consistency_defect(p, fan, jp) == 1.0);
    }
}

TEST_CASE("custom jump model samples its expressions on the fan") {
    ProblemText text;
    const ValidatedProblem p = make_validated(text);
    const CharacteristicFan fan = build_fan(p, 3, 0.25);
    const JumpModel model = JumpModel::custom(expr::Expression::parse("2*x"),
                                              expr::Expression::parse("t + x"));
    const JumpPair jp = sample_jumps(model, p, fan);
    CHECK(jp.mode == JumpMode::Custom);
    for (std::size_t m = 0; m < jp.labels.size(); ++m)
        CHECK(jp.delta0[m] == 2.0 * jp.labels[m]);
    // delta(t, x) with x = phi(t; label) = label + t for Q = 1
    const std::size_t m_count = jp.labels.size();
    for (std::size_t k = 0; k < jp.t.size(); ++k)
        for (std::size_t m = 0; m < m_count; ++m)
            CHECK(jp.delta[k * m_count + m] ==
                  doctest::Approx(jp.t[k] + fan.members[m].x[k]).epsilon(1e-13));
}

TEST_CASE("property: jumps scale linearly with pi1") {
    ProblemText base;
    base.K1 = "exp(-t)*(1+s)";
    base.pi1 = "1 + x";
    ProblemText scaled = base;
    scaled.pi1 = "3*(1 + x)";

    const ValidatedProblem p1 = make_validated(base);
    const ValidatedProblem p3 = make_validated(scaled);
    const CharacteristicFan fan = build_fan(p1, 5, 1e-3);

    const JumpPair j1 = sample_jumps(JumpModel::analytic(p1), p1, fan);
    const JumpPair j3 = sample_jumps(JumpModel::analytic(p3), p3, fan);
    for (std::size_t m = 0; m < j1.delta0.size(); ++m)
        CHECK(j3.delta0[m] == doctest::Approx(3.0 * j1.delta0[m]).epsilon(1e-14));
    for (std::size_t i = 0; i < j1.delta.size(); ++i)
        CHECK(j3.delta[i] == doctest::Approx(3.0 * j1.delta[i]).epsilon(1e-14));
}

TEST_CASE("delta0 does not depend on the tracing step") {
    ProblemText text;
    text.pi1 = "1 + x";
    text.Q = "1 + 0.5*sin(x)";
    const ValidatedProblem p = make_validated(text);
    const CharacteristicFan coarse = build_fan(p, 5, 1e-2);
    const CharacteristicFan fine = build_fan(p, 5, 1e-3);
    const JumpPair jc = sample_jumps(JumpModel::analytic(p), p, coarse);
    const JumpPair jf = sample_jumps(JumpModel::analytic(p), p, fine);
    CHECK(jc.delta0 == jf.delta0);  // bitwise: labels only, no tracing
}
