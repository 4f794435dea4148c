#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <numbers>
#include <vector>

#include "attrswitch/integrate.hpp"
#include "attrswitch/systems.hpp"

using namespace attrswitch;
using Catch::Approx;

namespace {

// zeta = a = beta = 0 reduces the impact system to the harmonic oscillator
// x'' = -x with period 2*pi.
SystemDef harmonic() {
    return SystemDef::soft_impact({0.0, 1.26, 0.0, 0.0, 1.0}, ControlChannel::AdditiveForce);
}

SystemDef impact_ref(ControlChannel ch = ControlChannel::AdditiveForce) {
    return SystemDef::soft_impact({0.01, 1.26, 0.7, 28.0, 0.85}, ch);
}

SystemDef duffing_ref() {
    return SystemDef::duffing({1.9, 1.2, 0.9, 1.0}, ControlChannel::CubicStiffness);
}

double endpoint_error(int steps) {
    auto sys = harmonic();
    const double h = 2.0 * std::numbers::pi / steps;
    Vec2 y{1.0, 0.0};
    for (int i = 0; i < steps; ++i) y = rk4_step(sys, i * h, y, 0.0, h);
    return norm2(y - Vec2{1.0, 0.0});
}

}  // namespace

TEST_CASE("harmonic oscillator returns after one period", "[integrate]") {
    CHECK(endpoint_error(1000) < 1e-10);
}

TEST_CASE("halving the step shrinks the endpoint error ~16x", "[integrate]") {
    const double e1 = endpoint_error(500);
    const double e2 = endpoint_error(1000);
    const double e3 = endpoint_error(2000);
    CHECK(e1 / e2 == Approx(16.0).margin(3.0));
    CHECK(e2 / e3 == Approx(16.0).margin(3.0));
}

TEST_CASE("single duffing step matches a step-halved oracle", "[integrate]") {
    auto sys = duffing_ref();
    const Vec2 y0{1.0, 0.0};
    const double h = 0.002;

    // Oracle: the same step resolved with 1024 substeps, refined until two
    // successive refinements agree below 1e-14.
    auto fine = [&](int n) {
        Vec2 y = y0;
        const double hh = h / n;
        for (int i = 0; i < n; ++i) y = rk4_step(sys, i * hh, y, 0.0, hh);
        return y;
    };
    Vec2 ref = fine(1024);
    REQUIRE(norm2(fine(2048) - ref) < 1e-14);

    Vec2 one = rk4_step(sys, 0.0, y0, 0.0, h);
    CHECK(norm2(one - ref) < 1e-12);

    // Frozen oracle values (computed from the refinement above).
    CHECK(one.x == Approx(1.0000000030386276).epsilon(1e-14));
    CHECK(one.v == Approx(4.5572600049452495e-06).margin(1e-12));
}

TEST_CASE("energy drift stays below 1e-9 per 1000 steps", "[integrate]") {
    auto sys = harmonic();
    Vec2 y{1.0, 0.0};
    const double h = 0.002;
    const double e0 = 0.5 * norm2_sq(y);
    for (int i = 0; i < 1000; ++i) y = rk4_step(sys, i * h, y, 0.0, h);
    CHECK(std::fabs(0.5 * norm2_sq(y) - e0) < 1e-9);
}

TEST_CASE("divergence raises an error carrying the last state", "[integrate]") {
    auto sys = duffing_ref();
    const Vec2 huge{1e160, 0.0};
    try {
        (void)rk4_step(sys, 0.0, huge, 0.0, 0.002);
        FAIL("expected IntegrationError");
    } catch (const IntegrationError& err) {
        CHECK(err.last_state.x == huge.x);
        CHECK(err.tau == 0.0);
    }
}

TEST_CASE("beta = 0 takes the plain fixed-step path", "[integrate]") {
    auto sys = SystemDef::soft_impact({0.01, 1.26, 0.7, 0.0, 0.85},
                                      ControlChannel::AdditiveForce);
    StepSpec spec;
    auto traj = integrate(sys, {0.4, 0.1}, 0.0, 1.0, spec);
    Vec2 y{0.4, 0.1};
    // replay with plain rk4 steps on the same grid
    std::size_t i = 0;
    for (; i + 1 < traj.size() && traj.times[i] + spec.h <= 1.0 + 1e-12; ++i) {
        CHECK(traj.states[i].x == y.x);
        CHECK(traj.states[i].v == y.v);
        y = rk4_step(sys, traj.times[i], y, 0.0, spec.h);
    }
}

TEST_CASE("trajectories are bit-identical across repeated runs", "[integrate]") {
    auto sys = impact_ref();
    StepSpec spec;
    auto a = integrate(sys, {0.0, 0.0}, 0.0, 30.0, spec);
    auto b = integrate(sys, {0.0, 0.0}, 0.0, 30.0, spec);
    REQUIRE(a.size() == b.size());
    CHECK(std::memcmp(a.states.data(), b.states.data(), a.size() * sizeof(Vec2)) == 0);
    CHECK(std::memcmp(a.times.data(), b.times.data(), a.size() * sizeof(double)) == 0);
}

TEST_CASE("surface crossings are localized to tolerance", "[integrate]") {
    auto sys = impact_ref();
    StepSpec spec;
    std::vector<CrossingEvent> events;
    Vec2 y{0.0, 0.0};
    const double T = sys.period();
    y = flow(sys, 0.0, y, 0.0, 20.0 * T, spec, nullptr);
    events.clear();
    y = flow(sys, 20.0 * T, y, 0.0, 10.0 * T, spec, &events);

    REQUIRE(!events.empty());
    for (const auto& ev : events) {
        CHECK(std::fabs(ev.y.x - 1.26) < 5e-9);  // on surface within bisection accuracy
        CHECK((ev.upward == (ev.y.v > 0.0)));    // entering contact moves upward
    }
    // alternating entry/exit
    for (std::size_t i = 1; i < events.size(); ++i)
        CHECK(events[i].upward != events[i - 1].upward);
}

TEST_CASE("emitted samples agree with the Heaviside branch that follows", "[integrate]") {
    auto sys = impact_ref();
    StepSpec spec;
    auto traj = integrate(sys, {0.0, 0.0}, 100.0, 130.0, spec);
    for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
        const Vec2 y = traj.states[i];
        const double s = y.x - 1.26;
        if (std::fabs(s) < spec.surface_tol) continue;
        // the branch used by the next internal step starts from this sign
        auto p = rhs_partials(sys, traj.times[i], y, 0.0);
        const double H = (s > 0.0) ? 1.0 : 0.0;
        CHECK(p.df_dy.a10 == Approx(-1.0 - 28.0 * H));
    }
}

TEST_CASE("integrate rejects bad arguments", "[integrate]") {
    auto sys = impact_ref();
    StepSpec spec;
    CHECK_THROWS_AS(integrate(sys, {0.0, 0.0}, 1.0, 1.0, spec), ConfigError);
    spec.h = 0.0;
    CHECK_THROWS_AS(integrate(sys, {0.0, 0.0}, 0.0, 1.0, spec), ConfigError);
}
