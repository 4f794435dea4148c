#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "attrswitch/integrate.hpp"
#include "attrswitch/systems.hpp"
#include "attrswitch/vec2.hpp"

namespace attrswitch {

inline constexpr int kUnclassified = -1;

/// Identity card of an attractor: minimal period multiple p (orbit period
/// p*T), its stroboscopic points at phase 0, and per-orbital-period measures.
/// period = 0 marks an aperiodic (or not yet settled) trajectory.
struct Fingerprint {
    int period = 0;
    std::vector<Vec2> poincare_points;
    int impacts_per_period = 0;  ///< contact episodes per orbital period (impact system)
    double contact_time = 0.0;   ///< time with x > e per orbital period
    double peak_to_peak = 0.0;   ///< max x - min x over one orbital period

    [[nodiscard]] bool periodic() const { return period > 0; }
    [[nodiscard]] const Vec2& anchor() const { return poincare_points.front(); }
};

struct SettleOptions {
    int n_transient = 300;     ///< forcing periods discarded as transient
    int n_sample = 64;         ///< stroboscopic samples used for period detection
    int p_max = 16;            ///< largest detectable period multiple
    double match_tol = 1e-6;   ///< phase-plane distance for period matching
};

/// Contact statistics and amplitude of one orbital period, measured with
/// event-localized stepping from a point on the orbit at stroboscopic phase.
struct OrbitMeasures {
    int impacts = 0;
    double contact_time = 0.0;
    double peak_to_peak = 0.0;
};

[[nodiscard]] inline OrbitMeasures measure_orbit(const SystemDef& sys, double tau0,
                                                 Vec2 anchor, int p, const StepSpec& spec) {
    OrbitMeasures out;
    const double T = sys.period();
    const bool impacting = sys.kind() == SystemKind::SoftImpact && sys.impact().beta > 0.0;
    const double gap = impacting ? sys.impact().e : 0.0;

    std::vector<CrossingEvent> events;
    double x_min = anchor.x, x_max = anchor.x;
    Vec2 y = anchor;
    for (int k = 0; k < p; ++k) {
        const double t_period = tau0 + static_cast<double>(k) * T;
        const auto n = static_cast<std::int64_t>(std::floor(T / spec.h));
        for (std::int64_t i = 0; i <= n; ++i) {
            const double t = t_period + static_cast<double>(i) * spec.h;
            const double len = (i < n) ? spec.h : T - static_cast<double>(n) * spec.h;
            if (len <= 1e-12 * spec.h) break;
            y = advance_step(sys, t, y, 0.0, len, spec, impacting ? &events : nullptr);
            x_min = std::min(x_min, y.x);
            x_max = std::max(x_max, y.x);
        }
    }
    out.peak_to_peak = x_max - x_min;

    if (impacting) {
        const double t_start = tau0;
        const double t_end = tau0 + static_cast<double>(p) * T;
        bool in_contact = anchor.x > gap;
        double entered = t_start;
        for (const auto& ev : events) {
            if (ev.upward && !in_contact) {
                ++out.impacts;
                in_contact = true;
                entered = ev.tau;
            } else if (!ev.upward && in_contact) {
                out.contact_time += ev.tau - entered;
                in_contact = false;
            }
        }
        if (in_contact) out.contact_time += t_end - entered;
        // Episodes wrapping the window boundary still have exactly one entry
        // inside the window, so counting upward crossings is wrap-safe.
    }
    return out;
}

/// Integrate through the transient, then detect the minimal period multiple
/// of the stroboscopic map and fingerprint the orbit. Returns an aperiodic
/// fingerprint (period = 0) when no multiple up to p_max matches.
[[nodiscard]] inline Fingerprint settle(const SystemDef& sys, Vec2 y0,
                                        const SettleOptions& opt = {},
                                        const StepSpec& spec = {}) {
    const double T = sys.period();
    Vec2 y = y0;
    for (int k = 0; k < opt.n_transient; ++k)
        y = flow(sys, static_cast<double>(k) * T, y, 0.0, T, spec);

    std::vector<Vec2> z(static_cast<std::size_t>(opt.n_sample));
    for (int k = 0; k < opt.n_sample; ++k) {
        z[static_cast<std::size_t>(k)] = y;
        y = flow(sys, static_cast<double>(opt.n_transient + k) * T, y, 0.0, T, spec);
    }

    int period = 0;
    for (int p = 1; p <= opt.p_max; ++p) {
        bool ok = true;
        for (int k = 0; k + p < opt.n_sample && ok; ++k)
            ok = norm2(z[static_cast<std::size_t>(k + p)] - z[static_cast<std::size_t>(k)]) <
                 opt.match_tol;
        if (ok) {
            period = p;
            break;
        }
    }

    Fingerprint fp;
    fp.period = period;
    if (period == 0) return fp;

    const int first = opt.n_sample - period;
    fp.poincare_points.assign(z.begin() + first, z.end());
    const double tau_meas = static_cast<double>(opt.n_transient + first) * T;
    auto m = measure_orbit(sys, tau_meas, fp.poincare_points.front(), period, spec);
    fp.impacts_per_period = m.impacts;
    fp.contact_time = m.contact_time;
    fp.peak_to_peak = m.peak_to_peak;
    return fp;
}

/// Distance between two fingerprints of equal period: the best cyclic
/// alignment of their stroboscopic point sets.
[[nodiscard]] inline double fingerprint_distance(const Fingerprint& a, const Fingerprint& b) {
    const int p = a.period;
    double best = std::numeric_limits<double>::infinity();
    for (int shift = 0; shift < p; ++shift) {
        double worst = 0.0;
        for (int j = 0; j < p; ++j) {
            const auto& pa = a.poincare_points[static_cast<std::size_t>(j)];
            const auto& pb = b.poincare_points[static_cast<std::size_t>((j + shift) % p)];
            worst = std::max(worst, norm2(pa - pb));
        }
        best = std::min(best, worst);
    }
    return best;
}

/// Index of the registry entry matching the fingerprint (same period, point
/// sets within tol under cyclic alignment), or kUnclassified.
[[nodiscard]] inline int classify(const Fingerprint& fp,
                                  const std::vector<Fingerprint>& registry, double tol) {
    if (!fp.periodic()) return kUnclassified;
    int best_idx = kUnclassified;
    double best = tol;
    for (std::size_t i = 0; i < registry.size(); ++i) {
        if (registry[i].period != fp.period) continue;
        const double d = fingerprint_distance(fp, registry[i]);
        if (d < best) {
            best = d;
            best_idx = static_cast<int>(i);
        }
    }
    return best_idx;
}

}  // namespace attrswitch
