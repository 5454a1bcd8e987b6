#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "spvide/errors.hpp"
#include "support.hpp"

using namespace testsupport;

namespace {

ValidatedProblem with_speed(const char* q, bool strict = true) {
    ProblemText text;
    text.Q = q;
    return make_validated(text, strict);
}

}  // namespace

TEST_CASE("constant speed translates the label") {
    const ValidatedProblem p = with_speed("1");
    const Characteristic c = trace_forward(p, 0.25, 1e-3);
    for (std::size_t k = 0; k < c.t.size(); ++k)
        CHECK(c.x[k] == doctest::Approx(0.25 + c.t[k]).epsilon(1e-13));
    CHECK(c.t.front() == 0.0);
    CHECK(c.x.front() == 0.25);
    CHECK(c.t.back() == 1.0);
}

TEST_CASE("time-dependent speed integrates exactly for polynomials") {
    const ValidatedProblem p = with_speed("1 + t");
    const Characteristic c = trace_forward(p, 0.0, 1e-3);
    CHECK(std::fabs(c.x.back() - 1.5) < 1e-10);
}

TEST_CASE("exponential flow: phi(1) = e and its inverse") {
    const ValidatedProblem p = with_speed("x", false);
    const Characteristic c = trace_forward(p, 1.0, 1e-3);
    CHECK(std::fabs(c.x.back() - std::exp(1.0)) < 1e-8);
    CHECK(std::fabs(first_integral(p, 1.0, std::exp(1.0), 1e-3) - 1.0) < 1e-8);
}

TEST_CASE("first integral identities") {
    const ValidatedProblem p = with_speed("1");
    CHECK(first_integral(p, 0.5, 0.75, 1e-3) == doctest::Approx(0.25).epsilon(1e-12));
    for (double x : {0.0, 0.3, 1.0})
        CHECK(first_integral(p, 0.0, x, 1e-3) == x);  // no evolution at t = 0
}

TEST_CASE("backward traces leaving the label interval are rejected") {
    const ValidatedProblem p = with_speed("1");
    CHECK_THROWS_AS(first_integral(p, 0.5, 0.3, 1e-3), OutOfStrip);   // psi = -0.2
    CHECK_THROWS_AS(first_integral(p, 0.25, 1.5, 1e-3), OutOfStrip);  // psi = 1.25
    CHECK_THROWS_AS(first_integral(p, 1.5, 1.0, 1e-3), InvalidParameter);  // t beyond t_end
}

TEST_CASE("fan construction") {
    const ValidatedProblem p = with_speed("1");
    const CharacteristicFan fan = build_fan(p, 3, 1e-3);
    CHECK(fan.size() == 3);
    CHECK(fan.members[0].label == 0.0);
    CHECK(fan.members[1].label == 0.5);
    CHECK(fan.members[2].label == 1.0);
    for (std::size_t k = 0; k < fan.t_grid().size(); ++k) {
        CHECK(fan.members[1].x[k] ==
              doctest::Approx(fan.members[0].x[k] + 0.5).epsilon(1e-12));
        CHECK(fan.members[2].x[k] > fan.members[1].x[k]);
    }

    CHECK_THROWS_AS(build_fan(p, 2, 1e-3), InvalidParameter);
    CHECK_THROWS_AS(trace_forward(p, -0.5, 1e-3), InvalidParameter);
    CHECK_THROWS_AS(trace_forward(p, 0.5, 0.0), InvalidParameter);
}

TEST_CASE("unit-speed strip matches the normalized boundary curve") {
    // For speeds with unit time-average along the lowest characteristic,
    // lambda(0) = 0 and lambda(t_end) = 1.
    const ValidatedProblem p = with_speed("1");
    const Characteristic lambda = trace_forward(p, 0.0, 1e-3);
    CHECK(lambda.x.front() == 0.0);
    CHECK(lambda.x.back() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("label-to-position map stays monotone for a wavy speed") {
    const ValidatedProblem p = with_speed("1 + 0.5*sin(x)");
    const CharacteristicFan fan = build_fan(p, 33, 1e-3);
    const std::size_t last = fan.t_grid().size() - 1;
    for (int m = 0; m + 1 < fan.size(); ++m)
        CHECK(fan.members[static_cast<std::size_t>(m + 1)].x[last] >
              fan.members[static_cast<std::size_t>(m)].x[last]);
}

TEST_CASE("property: forward/backward round trip within 1e-8") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (const char* q : {"1", "1+t", "x", "1+0.5*sin(x)"}) {
        const ValidatedProblem p = with_speed(q, false);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double x0 = unit(rng);
            const double t = unit(rng);
            const Characteristic c = trace_forward(p, x0, 1e-3);
            const double psi = first_integral(p, t, c.position_at(t), 1e-3);
            worst = std::max(worst, std::fabs(psi - x0));
        }
        CAPTURE(q);
        CHECK(worst <= 1e-8);
    }
}

TEST_CASE("property: halving the step cuts the round-trip error 8x or more") {
    const ValidatedProblem p = with_speed("x", false);
    const auto roundtrip_error = [&](double step) {
        double worst = 0.0;
        for (double x0 : {0.2, 0.5, 0.9}) {
            const Characteristic c = trace_forward(p, x0, step);
            worst = std::max(worst,
                             std::fabs(first_integral(p, 1.0, c.x.back(), step) - x0));
        }
        return worst;
    };
    // Steps chosen so the errors stay far above round-off.
    const double coarse = roundtrip_error(0.04);
    const double fine = roundtrip_error(0.02);
    CHECK(coarse / fine >= 8.0);
}

TEST_CASE("divergent speeds raise NonFiniteState") {
    ProblemText text;
    text.Q = "exp(400*x)";
    // Validation itself traces the strip, so the error fires there already.
    CHECK_THROWS_AS(make_validated(text, false), NonFiniteState);
}
