#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "attrswitch/continuation.hpp"
#include "helpers.hpp"

using namespace attrswitch;
using namespace fixtures;
using Catch::Approx;

namespace {

PeriodicOrbit impact_p2_orbit() {
    auto orbit = shoot(impact_ref(), kImpactP2, 2);
    orbit.param = 0.7;
    return orbit;
}

PeriodicOrbit impact_p5_orbit() {
    auto orbit = shoot(impact_ref(), kImpactP5, 5);
    orbit.param = 0.7;
    return orbit;
}

}  // namespace

TEST_CASE("shooting from a settled anchor converges immediately", "[shooting]") {
    auto sys = impact_ref();
    auto orbit = shoot(sys, kImpactP2, 2);
    CHECK(orbit.iterations <= 3);
    CHECK(orbit.residual < 1e-10);
    CHECK(norm2(orbit.anchor - kImpactP2) < 1e-6);
    CHECK(orbit.impacts == 1);
    CHECK(orbit.stable);
}

TEST_CASE("multiplier product matches the state-space contraction", "[shooting]") {
    // trace of the Jacobian is constant, so det(monodromy) = exp(-2*zeta*p*T)
    auto sys = impact_ref();
    auto p5 = shoot(sys, kImpactP5, 5);
    const double det = std::abs(p5.multiplier1 * p5.multiplier2);
    CHECK(det == Approx(std::exp(-2.0 * 0.01 * 5.0 * sys.period())).epsilon(1e-3));
    CHECK(det < 1.0 + 1e-6);

    auto duf = duffing_ref();
    auto small = shoot(duf, kDuffingSmall, 1);
    CHECK(std::abs(small.multiplier1 * small.multiplier2) ==
          Approx(std::exp(-0.9 * duf.period())).epsilon(1e-3));
}

TEST_CASE("stable duffing orbits at p1=0.8 have multipliers inside the unit circle",
          "[shooting]") {
    auto sys = SystemDef::duffing({1.9, 1.2, 0.8, 1.0}, ControlChannel::CubicStiffness);
    SettleOptions so;
    so.n_transient = 150;
    auto large = settle(sys, {-1.8, 1.0}, so);
    REQUIRE(large.period == 1);
    auto orbit = shoot(sys, large.anchor(), 1);
    CHECK(orbit.max_multiplier_mag() < 1.0);
    CHECK(orbit.stable);
}

TEST_CASE("finite-difference jacobian is step-halving consistent", "[shooting]") {
    auto sys = impact_ref();
    const Mat2 j1 = poincare_jacobian(sys, kImpactP2, 2, {}, 1e-6);
    const Mat2 j2 = poincare_jacobian(sys, kImpactP2, 2, {}, 5e-7);
    const double scale = std::max({std::fabs(j1.a00), std::fabs(j1.a01), std::fabs(j1.a10),
                                   std::fabs(j1.a11)});
    CHECK(std::fabs(j1.a00 - j2.a00) < 1e-4 * scale);
    CHECK(std::fabs(j1.a01 - j2.a01) < 1e-4 * scale);
    CHECK(std::fabs(j1.a10 - j2.a10) < 1e-4 * scale);
    CHECK(std::fabs(j1.a11 - j2.a11) < 1e-4 * scale);
}

TEST_CASE("shooting gives up cleanly on a hopeless guess", "[shooting]") {
    CHECK_THROWS_AS(shoot(impact_ref(), {0.5, 0.5}, 2, {}, 1e-10, 1), NoOrbitError);
}

TEST_CASE("period-2 branch: period doubling at the lower stability edge",
          "[continuation][slow]") {
    auto sys = impact_ref();
    auto branch = sweep(sys, impact_p2_orbit(), SweepParam::ForcingAmp, 0.615);
    REQUIRE(!branch.points.empty());

    // every branch point satisfies the shooting tolerance
    for (const auto& o : branch.points) CHECK(o.residual < 1e-10);

    auto pd = std::find_if(branch.events.begin(), branch.events.end(),
                           [](const BranchEvent& e) { return e.kind == EventKind::PeriodDoubling; });
    REQUIRE(pd != branch.events.end());

    const PeriodicOrbit* lo = nullptr;
    const PeriodicOrbit* hi = nullptr;
    for (std::size_t i = 0; i + 1 < branch.points.size(); ++i) {
        if (detail::pd_indicator(branch.points[i]) * detail::pd_indicator(branch.points[i + 1]) <
            0.0) {
            lo = &branch.points[i];
            hi = &branch.points[i + 1];
        }
    }
    REQUIRE(lo != nullptr);
    auto refined =
        refine_event(sys, SweepParam::ForcingAmp, EventKind::PeriodDoubling, *lo, *hi, 1e-5);
    CHECK(std::fabs(refined.param - 0.63111) < 1e-3);
    const double min_mult =
        std::min(refined.orbit.multiplier1.real(), refined.orbit.multiplier2.real());
    CHECK(std::fabs(min_mult + 1.0) < 1e-2);

    SECTION("below the doubling the orbit continues but is unstable") {
        const auto& last = branch.points.back();
        CHECK(last.param == Approx(0.615));
        CHECK_FALSE(last.stable);
        CHECK(last.max_multiplier_mag() > 1.0);
    }
    SECTION("stability flags agree with direct settling at stable points") {
        std::mt19937 rng(5u);
        std::vector<const PeriodicOrbit*> stable;
        for (const auto& o : branch.points)
            if (o.stable && o.param > 0.64) stable.push_back(&o);
        REQUIRE(stable.size() >= 5);
        std::shuffle(stable.begin(), stable.end(), rng);
        SettleOptions so;
        so.n_transient = 80;
        for (int i = 0; i < 5; ++i) {
            const auto* o = stable[static_cast<std::size_t>(i)];
            auto sys_at = sys.with_param(SweepParam::ForcingAmp, o->param);
            auto fp = settle(sys_at, o->anchor, so);
            REQUIRE(fp.period == 2);
            Fingerprint ref;
            ref.period = 2;
            ref.poincare_points = {o->anchor, poincare_map(sys_at, o->anchor, 1)};
            CHECK(fingerprint_distance(fp, ref) < 1e-6);
        }
    }
}

TEST_CASE("grazing contact of the period-5 orbit is localized", "[continuation][slow]") {
    auto sys = impact_ref();
    auto branch = sweep(sys, impact_p5_orbit(), SweepParam::ForcingAmp, 0.725);
    auto gr = std::find_if(branch.events.begin(), branch.events.end(),
                           [](const BranchEvent& e) { return e.kind == EventKind::Grazing; });
    REQUIRE(gr != branch.events.end());

    const PeriodicOrbit* lo = nullptr;
    const PeriodicOrbit* hi = nullptr;
    for (std::size_t i = 0; i + 1 < branch.points.size(); ++i)
        if (branch.points[i].impacts != branch.points[i + 1].impacts) {
            lo = &branch.points[i];
            hi = &branch.points[i + 1];
        }
    REQUIRE(lo != nullptr);
    auto refined =
        refine_event(sys, SweepParam::ForcingAmp, EventKind::Grazing, *lo, *hi, 1e-6);
    CHECK(std::fabs(refined.param - 0.71258) < 1e-3);

    // at the refined parameter the free flight grazes the surface
    auto at = sys.with_param(SweepParam::ForcingAmp, refined.param);
    const double approach = 1.26 - max_x_outside_contact(at, refined.orbit);
    CHECK(approach < 1e-6);
    CHECK(approach > -1e-9);
}

TEST_CASE("arclength continuation rounds the duffing folds", "[continuation][slow]") {
    auto sys = SystemDef::duffing({1.9, 1.2, 0.8, 1.0}, ControlChannel::CubicStiffness);
    SettleOptions so;
    so.n_transient = 150;
    auto large = settle(sys, {-1.8, 1.0}, so);
    auto start = shoot(sys, large.anchor(), 1);
    start.param = 0.8;

    auto pair = fold_pair_at(sys, SweepParam::Damping, start, 0.55, 1.05);
    REQUIRE(pair.ok);
    CHECK(std::fabs(pair.lower - 0.69494) < 1e-3);
    CHECK(std::fabs(pair.upper - 0.90352) < 1e-3);
}

TEST_CASE("synthetic bisection converges in the expected number of steps",
          "[continuation]") {
    int evals = 0;
    const double root =
        bisect_indicator(0.0, 1.0, 1e-6, [](double q) { return q - 0.3; }, &evals);
    CHECK(std::fabs(root - 0.3) < 1e-6);
    // one evaluation seeds the loop; each halving costs one more
    CHECK(evals - 1 == static_cast<int>(std::ceil(std::log2(1.0 / 1e-6))));
}

TEST_CASE("event refinement rejects a bracket without a sign change", "[continuation]") {
    auto sys = impact_ref();
    auto a = impact_p2_orbit();
    CHECK_THROWS_AS(
        refine_event(sys, SweepParam::ForcingAmp, EventKind::PeriodDoubling, a, a, 1e-4),
        ConfigError);
    CHECK_THROWS_AS(refine_event(sys, SweepParam::ForcingAmp, EventKind::Grazing, a, a, 1e-4),
                    ConfigError);
}

TEST_CASE("two-impact window past the grazing ends in a fold", "[continuation][slow]") {
    auto sys = impact_ref();
    auto near_gr = walk_param(sys, SweepParam::ForcingAmp, impact_p2_orbit(), 1.543, {}, 0.005);
    near_gr.param = 1.543;

    SweepOptions crossing;
    crossing.dstep = 5e-4;
    auto cross = sweep(sys, near_gr, SweepParam::ForcingAmp, 1.5462, crossing);
    const PeriodicOrbit* lo = nullptr;
    const PeriodicOrbit* hi = nullptr;
    for (std::size_t i = 0; i + 1 < cross.points.size(); ++i)
        if (cross.points[i].impacts != cross.points[i + 1].impacts) {
            lo = &cross.points[i];
            hi = &cross.points[i + 1];
        }
    REQUIRE(lo != nullptr);
    auto gr1 = refine_event(sys, SweepParam::ForcingAmp, EventKind::Grazing, *lo, *hi, 1e-7);
    CHECK(std::fabs(gr1.param - 1.54462) < 1e-3);
    CHECK(gr1.orbit_hi.impacts == 2);

    // the narrow window of two-impact orbits loses stability via a fold
    SweepOptions window;
    window.dstep = 2e-5;
    window.min_dstep = 1e-9;
    auto br = sweep(sys, gr1.orbit_hi, SweepParam::ForcingAmp, 1.5470, window);
    REQUIRE(br.truncated);
    auto fold = std::find_if(br.events.begin(), br.events.end(),
                             [](const BranchEvent& e) { return e.kind == EventKind::Fold; });
    REQUIRE(fold != br.events.end());
    CHECK(std::fabs(fold->param - 1.54486) < 1e-3);
    CHECK(std::fabs(br.points.back().max_multiplier_mag() - 1.0) < 0.05);
}

TEST_CASE("doubling locus tracks across the gap parameter", "[continuation][slow]") {
    auto sys = impact_ref();
    CodimOneOptions co;
    co.param1 = SweepParam::ForcingAmp;
    co.param2 = SweepParam::Gap;
    co.kind = EventKind::PeriodDoubling;
    co.direction = -1.0;
    co.coarse_step = 0.01;
    co.param1_limit = 0.3;
    co.seed_margin = 0.08;
    auto curve = trace_codim1_region(sys, impact_p2_orbit(), {1.26, 1.36, 1.46}, co);
    REQUIRE(curve.points.size() == 3);
    for (const auto& pt : curve.points) CHECK(pt.ok);
    CHECK(std::fabs(curve.points[0].param1 - 0.63111) < 1e-3);
    // the locus moves monotonically with the gap here
    CHECK(curve.points[1].param1 > curve.points[0].param1);
    CHECK(curve.points[2].param1 > curve.points[1].param1);
}
