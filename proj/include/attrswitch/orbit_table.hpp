#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "attrswitch/errors.hpp"
#include "attrswitch/integrate.hpp"
#include "attrswitch/systems.hpp"

namespace attrswitch {

/// The desired attractor sampled over one orbital period on the controller's
/// sampling grid, phase-referenced to tau = 0.
///
/// The sampling step is the nominal controller step nudged so that an integer
/// number of samples covers the orbital period exactly (relative adjustment
/// ~1e-6 at the default step). This keeps the controller grid and the table
/// grid aligned indefinitely: lookups never interpolate and the table closes
/// to the settling tolerance rather than absorbing an O(step) closure error.
struct OrbitTable {
    int period_multiple = 1;    ///< p: orbit period = p * T
    double step = 0.0;          ///< effective sampling step h_eff = p*T/N
    double period = 0.0;        ///< orbital period p*T
    double closure_error = 0.0; ///< |Y(p*T) - Y(0)|
    std::vector<Vec2> samples;  ///< N samples, samples[k] at phase k*h_eff

    [[nodiscard]] std::size_t size() const { return samples.size(); }

    /// Index of the sample at absolute time tau; tau must lie on the grid
    /// (a multiple of step) up to rounding noise.
    [[nodiscard]] std::size_t index_at(double tau) const {
        double phase = std::fmod(tau, period);
        if (phase < 0.0) phase += period;
        const auto n = static_cast<std::int64_t>(samples.size());
        auto k = static_cast<std::int64_t>(std::llround(phase / step));
        k %= n;
        return static_cast<std::size_t>(k);
    }

    [[nodiscard]] const Vec2& at_time(double tau) const { return samples[index_at(tau)]; }
};

/// Sample the orbit through `anchor` (a stroboscopic point at phase 0) over
/// one orbital period. The anchor must lie on a periodic orbit of the
/// uncontrolled system to within match_tol, or the table will not close.
[[nodiscard]] inline OrbitTable make_orbit_table(const SystemDef& sys, Vec2 anchor, int p,
                                                 double nominal_h, const StepSpec& base_spec,
                                                 double match_tol = 1e-6) {
    if (p < 1) throw ConfigError("make_orbit_table: period multiple must be >= 1");
    if (!(nominal_h > 0.0)) throw ConfigError("make_orbit_table: step must be positive");
    OrbitTable table;
    table.period_multiple = p;
    table.period = static_cast<double>(p) * sys.period();
    const auto n = static_cast<std::int64_t>(std::llround(table.period / nominal_h));
    if (n < 4) throw ConfigError("make_orbit_table: step too large for the orbital period");
    table.step = table.period / static_cast<double>(n);

    StepSpec spec = base_spec;
    spec.h = table.step;
    table.samples.reserve(static_cast<std::size_t>(n));
    Vec2 y = anchor;
    for (std::int64_t k = 0; k < n; ++k) {
        table.samples.push_back(y);
        y = advance_step(sys, static_cast<double>(k) * table.step, y, 0.0, table.step, spec);
    }
    table.closure_error = norm2(y - anchor);
    if (table.closure_error >= match_tol)
        throw ConfigError("make_orbit_table: orbit does not close (closure " +
                          std::to_string(table.closure_error) + ")");
    return table;
}

}  // namespace attrswitch
