#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "attrswitch/errors.hpp"
#include "attrswitch/fingerprint.hpp"
#include "attrswitch/integrate.hpp"
#include "attrswitch/systems.hpp"

namespace attrswitch {

inline constexpr double kShootTol = 1e-10;
inline constexpr int kShootMaxIter = 30;
inline constexpr double kJacobianDelta = 1e-6;

/// Stroboscopic map over p forcing periods from phase 0.
[[nodiscard]] inline Vec2 poincare_map(const SystemDef& sys, Vec2 z, int p,
                                       const StepSpec& spec = {}) {
    const double T = sys.period();
    Vec2 y = z;
    for (int k = 0; k < p; ++k)
        y = flow(sys, static_cast<double>(k) * T, y, 0.0, T, spec);
    return y;
}

/// Jacobian of the stroboscopic map by central finite differences.
///
/// delta is reduced once (to a tenth) when the one-sided slopes of a
/// significant entry disagree in sign, which happens when the stencil
/// straddles a grazing contact.
[[nodiscard]] inline Mat2 poincare_jacobian(const SystemDef& sys, Vec2 z, int p,
                                            const StepSpec& spec = {},
                                            double delta = kJacobianDelta) {
    auto compute = [&](double d, bool* consistent) {
        const Vec2 px_p = poincare_map(sys, {z.x + d, z.v}, p, spec);
        const Vec2 px_m = poincare_map(sys, {z.x - d, z.v}, p, spec);
        const Vec2 pv_p = poincare_map(sys, {z.x, z.v + d}, p, spec);
        const Vec2 pv_m = poincare_map(sys, {z.x, z.v - d}, p, spec);
        Mat2 j{(px_p.x - px_m.x) / (2.0 * d), (pv_p.x - pv_m.x) / (2.0 * d),
               (px_p.v - px_m.v) / (2.0 * d), (pv_p.v - pv_m.v) / (2.0 * d)};
        if (consistent) {
            // one-sided slopes must agree in sign for significant entries
            const Vec2 p0 = poincare_map(sys, z, p, spec);
            auto agree = [&](double minus, double center, double plus, double central) {
                if (std::fabs(central) < 1e-3) return true;
                return (plus - center) * (center - minus) >= 0.0;
            };
            *consistent = agree(px_m.x, p0.x, px_p.x, j.a00) &&
                          agree(px_m.v, p0.v, px_p.v, j.a10) &&
                          agree(pv_m.x, p0.x, pv_p.x, j.a01) &&
                          agree(pv_m.v, p0.v, pv_p.v, j.a11);
        }
        return j;
    };
    bool ok = true;
    Mat2 j = compute(delta, &ok);
    if (!ok) j = compute(delta * 0.1, nullptr);
    return j;
}

/// A periodic orbit pinned down by Newton iteration on the stroboscopic map.
struct PeriodicOrbit {
    Vec2 anchor;                 ///< fixed point of P^p at phase 0
    int period_multiple = 1;
    double param = 0.0;          ///< value of the swept parameter, if any
    std::complex<double> multiplier1, multiplier2;
    bool stable = false;
    double residual = 0.0;       ///< |P^p(anchor) - anchor|
    int impacts = 0;
    double contact_time = 0.0;
    double peak_to_peak = 0.0;
    int iterations = 0;  ///< Newton iterations spent

    [[nodiscard]] double max_multiplier_mag() const {
        return std::max(std::abs(multiplier1), std::abs(multiplier2));
    }
    [[nodiscard]] bool multipliers_real() const {
        return multiplier1.imag() == 0.0 && multiplier2.imag() == 0.0;
    }
};

namespace detail {

inline void fill_multipliers(PeriodicOrbit& orbit, const Mat2& j) {
    const double tr = j.trace();
    const double det = j.det();
    const double disc = tr * tr - 4.0 * det;
    if (disc >= 0.0) {
        const double root = std::sqrt(disc);
        orbit.multiplier1 = {0.5 * (tr + root), 0.0};
        orbit.multiplier2 = {0.5 * (tr - root), 0.0};
    } else {
        const double root = std::sqrt(-disc);
        orbit.multiplier1 = {0.5 * tr, 0.5 * root};
        orbit.multiplier2 = {0.5 * tr, -0.5 * root};
    }
    orbit.stable = orbit.max_multiplier_mag() < 1.0;
}

}  // namespace detail

/// Newton iteration on G(z) = P^p(z) - z. Throws NoOrbitError when the
/// iteration does not reach shoot_tol within max_iter steps.
[[nodiscard]] inline PeriodicOrbit shoot(const SystemDef& sys, Vec2 z_guess, int p,
                                         const StepSpec& spec = {},
                                         double shoot_tol = kShootTol,
                                         int max_iter = kShootMaxIter) {
    Vec2 z = z_guess;
    Mat2 jac{};
    double gnorm = std::numeric_limits<double>::infinity();
    for (int it = 0; it < max_iter; ++it) {
        const Vec2 g = poincare_map(sys, z, p, spec) - z;
        gnorm = norm2(g);
        if (!std::isfinite(gnorm) || gnorm > 1e6)
            throw NoOrbitError("shoot: iteration diverged");
        jac = poincare_jacobian(sys, z, p, spec);
        if (gnorm < shoot_tol) {
            PeriodicOrbit orbit;
            orbit.anchor = z;
            orbit.period_multiple = p;
            orbit.residual = gnorm;
            orbit.iterations = it;
            detail::fill_multipliers(orbit, jac);
            const auto m = measure_orbit(sys, 0.0, z, p, spec);
            orbit.impacts = m.impacts;
            orbit.contact_time = m.contact_time;
            orbit.peak_to_peak = m.peak_to_peak;
            return orbit;
        }
        // solve (J - I) dz = -g
        const Mat2 a{jac.a00 - 1.0, jac.a01, jac.a10, jac.a11 - 1.0};
        const double det = a.det();
        if (std::fabs(det) < 1e-14)
            throw NoOrbitError("shoot: singular shooting Jacobian (fold?)");
        const Vec2 dz{(-g.x * a.a11 + g.v * a.a01) / det,
                      (-g.v * a.a00 + g.x * a.a10) / det};
        z += dz;
    }
    throw NoOrbitError("shoot: no convergence after " + std::to_string(max_iter) +
                       " iterations (|G| = " + std::to_string(gnorm) + ")");
}

}  // namespace attrswitch
