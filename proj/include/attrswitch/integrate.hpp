#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "attrswitch/errors.hpp"
#include "attrswitch/systems.hpp"
#include "attrswitch/vec2.hpp"

namespace attrswitch {

/// Fixed-step integration settings.
struct StepSpec {
    double h = 0.002;            ///< step size, > 0
    double surface_tol = 1e-10;  ///< impact-surface bisection tolerance
    int max_bisect = 80;         ///< bisection iteration cap
};

/// One classical 4-stage explicit Runge-Kutta step with the control input
/// held constant across the step (zero-order hold).
[[nodiscard]] inline Vec2 rk4_step(const SystemDef& sys, double tau, Vec2 y, double u,
                                   double h) {
    const Vec2 k1 = eval_rhs(sys, tau, y, u);
    const Vec2 k2 = eval_rhs(sys, tau + 0.5 * h, y + 0.5 * h * k1, u);
    const Vec2 k3 = eval_rhs(sys, tau + 0.5 * h, y + 0.5 * h * k2, u);
    const Vec2 k4 = eval_rhs(sys, tau + h, y + h * k3, u);
    const Vec2 out = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!finite(out))
        throw IntegrationError("rk4_step: integration diverged (non-finite state)", tau, y);
    return out;
}

/// A crossing of the impact surface x = e_eff, localized by bisection.
struct CrossingEvent {
    double tau;
    Vec2 y;
    bool upward;  ///< true when x - e_eff goes from negative to positive
};

/// Advance one macro step of size h, localizing any crossing of the impact
/// surface by bisection on the sub-step so the Heaviside branch stays
/// constant within each sub-step. No-op localization for the Duffing system
/// or when beta = 0. Crossings are appended to `events` when given.
[[nodiscard]] inline Vec2 advance_step(const SystemDef& sys, double tau, Vec2 y, double u,
                                       double h, const StepSpec& spec,
                                       std::vector<CrossingEvent>* events = nullptr) {
    if (h <= 0.0) return y;
    const bool has_surface =
        sys.kind() == SystemKind::SoftImpact && sys.impact().beta > 0.0;
    if (!has_surface) return rk4_step(sys, tau, y, u, h);

    const double gap = sys.effective_gap(u);
    double t_local = 0.0;  // progress within [0, h]
    Vec2 cur = y;
    while (true) {
        const double remaining = h - t_local;
        Vec2 next = rk4_step(sys, tau + t_local, cur, u, remaining);
        const double s0 = cur.x - gap;
        const double s1 = next.x - gap;
        // Starting on the surface we trust the endpoint sign; only genuine
        // sign changes from off-surface points get localized.
        if (std::fabs(s0) < spec.surface_tol || (s0 > 0.0) == (s1 > 0.0)) return next;

        double lo = 0.0, hi = remaining;
        Vec2 y_cross = next;
        double t_cross = remaining;
        bool converged = false;
        for (int it = 0; it < spec.max_bisect; ++it) {
            const double mid = 0.5 * (lo + hi);
            const Vec2 ym = rk4_step(sys, tau + t_local, cur, u, mid);
            const double sm = ym.x - gap;
            if (std::fabs(sm) < spec.surface_tol) {
                y_cross = ym;
                t_cross = mid;
                converged = true;
                break;
            }
            if ((sm > 0.0) == (s0 > 0.0)) {
                lo = mid;
            } else {
                hi = mid;
                y_cross = ym;
                t_cross = mid;
            }
            if (hi - lo < 1e-15 * h) {
                converged = true;  // interval exhausted; endpoint is on-surface to FP
                break;
            }
        }
        if (!converged)
            throw EventLocalizationError("advance_step: surface bisection did not converge",
                                         tau + t_local, cur);
        if (events) events->push_back({tau + t_local + t_cross, y_cross, s0 < 0.0});
        t_local += t_cross;
        cur = y_cross;
        if (t_local >= h) return cur;
    }
}

/// Advance exactly `duration` from tau0: full steps of spec.h plus one
/// remainder step to land on the target time.
[[nodiscard]] inline Vec2 flow(const SystemDef& sys, double tau0, Vec2 y, double u,
                               double duration, const StepSpec& spec,
                               std::vector<CrossingEvent>* events = nullptr) {
    const auto n = static_cast<std::int64_t>(std::floor(duration / spec.h));
    Vec2 cur = y;
    for (std::int64_t i = 0; i < n; ++i)
        cur = advance_step(sys, tau0 + static_cast<double>(i) * spec.h, cur, u, spec.h, spec,
                           events);
    const double rem = duration - static_cast<double>(n) * spec.h;
    if (rem > 1e-12 * spec.h)
        cur = advance_step(sys, tau0 + static_cast<double>(n) * spec.h, cur, u, rem, spec,
                           events);
    return cur;
}

/// Sampled trajectory on the fixed step grid. Event sub-steps are internal
/// and not emitted.
struct Trajectory {
    std::vector<double> times;
    std::vector<Vec2> states;
    std::vector<double> controls;

    [[nodiscard]] std::size_t size() const { return times.size(); }
};

/// Integrate from tau0 to tau1 emitting every grid point. The control input
/// is sampled once per step (zero-order hold): u_k = control(tau_k) is held
/// on [tau_k, tau_k + h].
template <class ControlFn>
[[nodiscard]] Trajectory integrate(const SystemDef& sys, Vec2 y0, double tau0, double tau1,
                                   const StepSpec& spec, ControlFn&& control) {
    if (!(tau1 > tau0)) throw ConfigError("integrate: tau1 must exceed tau0");
    if (!(spec.h > 0.0)) throw ConfigError("integrate: step size must be positive");
    const double duration = tau1 - tau0;
    const auto n = static_cast<std::int64_t>(std::floor(duration / spec.h));
    const double rem = duration - static_cast<double>(n) * spec.h;
    const bool has_rem = rem > 1e-12 * spec.h;

    Trajectory out;
    out.times.reserve(static_cast<std::size_t>(n) + 2);
    out.states.reserve(static_cast<std::size_t>(n) + 2);
    out.controls.reserve(static_cast<std::size_t>(n) + 2);

    Vec2 cur = y0;
    for (std::int64_t i = 0; i <= n; ++i) {
        const double t = tau0 + static_cast<double>(i) * spec.h;
        const double u = control(t);
        out.times.push_back(t);
        out.states.push_back(cur);
        out.controls.push_back(u);
        if (i < n)
            cur = advance_step(sys, t, cur, u, spec.h, spec);
        else if (has_rem)
            cur = advance_step(sys, t, cur, u, rem, spec);
    }
    if (has_rem) {
        out.times.push_back(tau1);
        out.states.push_back(cur);
        out.controls.push_back(control(tau1));
    }
    return out;
}

/// Zero-control convenience overload.
[[nodiscard]] inline Trajectory integrate(const SystemDef& sys, Vec2 y0, double tau0,
                                          double tau1, const StepSpec& spec) {
    return integrate(sys, y0, tau0, tau1, spec, [](double) { return 0.0; });
}

}  // namespace attrswitch
