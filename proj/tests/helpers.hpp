#pragma once

// Shared fixtures: the two benchmark systems at the reference parameter sets
// and lazily settled attractor fingerprints. The seed points lie on the
// attractors to ~1e-9 (found by long settling); a short re-settle pins them
// to this build's arithmetic.

#include "attrswitch/fingerprint.hpp"
#include "attrswitch/orbit_table.hpp"
#include "attrswitch/systems.hpp"

namespace fixtures {

using namespace attrswitch;

inline SystemDef impact_ref(ControlChannel ch = ControlChannel::AdditiveForce) {
    return SystemDef::soft_impact({0.01, 1.26, 0.7, 28.0, 0.85}, ch);
}

inline SystemDef impact_three(ControlChannel ch = ControlChannel::ForcingAmplitude) {
    return SystemDef::soft_impact({0.01, 1.28, 0.49, 28.0, 0.8528}, ch);
}

inline SystemDef duffing_ref() {
    return SystemDef::duffing({1.9, 1.2, 0.9, 1.0}, ControlChannel::CubicStiffness);
}

// points on the attractors at stroboscopic phase 0
inline constexpr Vec2 kImpactP5{-0.882946966163, 0.648017446776};
inline constexpr Vec2 kImpactP2{-0.618641287115, 1.022020054969};
inline constexpr Vec2 kDuffingLarge{-1.727144697908, -0.565610646638};
inline constexpr Vec2 kDuffingSmall{-0.440537310617, -0.934112069156};
inline constexpr Vec2 kThreeP7Large{0.421533240626, 0.914637378241};
inline constexpr Vec2 kThreeP7Small{0.230420169639, 0.829513237299};
inline constexpr Vec2 kThreeP3{-0.147294718050, 1.092085991351};

inline const Fingerprint& settle_cached(const SystemDef& sys, Vec2 seed, Fingerprint& slot) {
    if (!slot.periodic()) {
        SettleOptions opt;
        opt.n_transient = 50;  // seed is already on the orbit
        slot = settle(sys, seed, opt);
    }
    return slot;
}

inline const Fingerprint& impact_p5() {
    static Fingerprint fp;
    return settle_cached(impact_ref(), kImpactP5, fp);
}

inline const Fingerprint& impact_p2() {
    static Fingerprint fp;
    return settle_cached(impact_ref(), kImpactP2, fp);
}

inline const Fingerprint& duffing_large() {
    static Fingerprint fp;
    return settle_cached(duffing_ref(), kDuffingLarge, fp);
}

inline const Fingerprint& duffing_small() {
    static Fingerprint fp;
    return settle_cached(duffing_ref(), kDuffingSmall, fp);
}

}  // namespace fixtures
