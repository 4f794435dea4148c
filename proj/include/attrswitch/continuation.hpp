#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "attrswitch/errors.hpp"
#include "attrswitch/shooting.hpp"
#include "attrswitch/systems.hpp"

namespace attrswitch {

enum class EventKind { Fold, PeriodDoubling, Grazing };

struct BranchEvent {
    EventKind kind;
    double param = 0.0;     ///< refined value, or bracket midpoint when !refined
    double param_lo = 0.0;  ///< bracketing pair
    double param_hi = 0.0;
    bool refined = false;
};

/// One-parameter family of periodic orbits with stability flags and the
/// bifurcations detected along it.
struct Branch {
    SweepParam swept{};
    std::vector<PeriodicOrbit> points;
    std::vector<BranchEvent> events;
    bool truncated = false;
    std::string note;
};

struct SweepOptions {
    double dstep = 0.002;
    double min_dstep = 1e-6;
    StepSpec spec{};
};

/// Converged anchors moving farther than this in one continuation step are
/// treated as hops onto a coexisting orbit family.
inline constexpr double kAnchorHopTol = 0.05;

/// Shoot at an explicit parameter value, tagging the orbit with it.
[[nodiscard]] inline PeriodicOrbit shoot_at(const SystemDef& sys, SweepParam param,
                                            double value, Vec2 z_guess, int p,
                                            const StepSpec& spec = {}) {
    PeriodicOrbit orbit = shoot(sys.with_param(param, value), z_guess, p, spec);
    orbit.param = value;
    return orbit;
}

namespace detail {

/// Period-doubling indicator: distance of the most negative real multiplier
/// from -1. Positive while the orbit has no multiplier below -1.
[[nodiscard]] inline double pd_indicator(const PeriodicOrbit& o) {
    if (!o.multipliers_real()) return 1.0;  // complex pair cannot sit at -1
    return 1.0 + std::min(o.multiplier1.real(), o.multiplier2.real());
}

[[nodiscard]] inline double fold_indicator(const PeriodicOrbit& o) {
    if (!o.multipliers_real()) return 1.0;
    return 1.0 - std::max(o.multiplier1.real(), o.multiplier2.real());
}

inline void detect_events(const PeriodicOrbit& a, const PeriodicOrbit& b, Branch& branch,
                          bool fold_by_multiplier = true) {
    auto bracket = [&](EventKind kind) {
        BranchEvent ev;
        ev.kind = kind;
        ev.param_lo = std::min(a.param, b.param);
        ev.param_hi = std::max(a.param, b.param);
        ev.param = 0.5 * (ev.param_lo + ev.param_hi);
        branch.events.push_back(ev);
    };
    if (pd_indicator(a) * pd_indicator(b) < 0.0) bracket(EventKind::PeriodDoubling);
    if (a.impacts != b.impacts) bracket(EventKind::Grazing);
    // the turn detector owns folds on arclength branches
    if (fold_by_multiplier && fold_indicator(a) * fold_indicator(b) < 0.0)
        bracket(EventKind::Fold);
}

}  // namespace detail

/// Natural-parameter continuation from a converged orbit toward `to`. The
/// step halves on Newton failure; exhausting min_dstep truncates the branch
/// (recorded as a suspected fold when the leading multiplier is near +1).
[[nodiscard]] inline Branch sweep(const SystemDef& sys, const PeriodicOrbit& start,
                                  SweepParam param, double to,
                                  const SweepOptions& opt = {}) {
    Branch branch;
    branch.swept = param;
    branch.points.push_back(start);
    const double dir = to >= start.param ? 1.0 : -1.0;
    double dq = opt.dstep;
    while (true) {
        const PeriodicOrbit& prev = branch.points.back();
        if (dir * (to - prev.param) <= 0.0) break;
        double q = prev.param + dir * dq;
        if (dir * (q - to) > 0.0) q = to;
        bool ok = false;
        PeriodicOrbit next;
        try {
            next = shoot_at(sys, param, q, prev.anchor, prev.period_multiple, opt.spec);
            ok = norm2(next.anchor - prev.anchor) <= kAnchorHopTol;
        } catch (const NoOrbitError&) {
        }
        if (!ok) {
            dq *= 0.5;
            if (dq < opt.min_dstep) {
                branch.truncated = true;
                branch.note = "continuation stalled at " + std::to_string(prev.param);
                if (detail::fold_indicator(prev) < 0.2) {
                    BranchEvent ev;
                    ev.kind = EventKind::Fold;
                    ev.param_lo = std::min(prev.param, q);
                    ev.param_hi = std::max(prev.param, q);
                    ev.param = prev.param;
                    branch.events.push_back(ev);
                }
                break;
            }
            continue;
        }
        detail::detect_events(branch.points.back(), next, branch);
        branch.points.push_back(std::move(next));
        dq = std::min(dq * 2.0, opt.dstep);
    }
    return branch;
}

/// Largest x reached outside contact episodes over one orbital period; the
/// gap e minus this value shrinks to zero as the orbit approaches a grazing
/// contact from below.
[[nodiscard]] inline double max_x_outside_contact(const SystemDef& sys,
                                                  const PeriodicOrbit& orbit,
                                                  const StepSpec& spec = {}) {
    const double e = sys.impact().e;
    const double T = sys.period();
    Vec2 y = orbit.anchor;
    double best = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < orbit.period_multiple; ++k) {
        const double t0 = static_cast<double>(k) * T;
        const auto n = static_cast<std::int64_t>(std::floor(T / spec.h));
        for (std::int64_t i = 0; i <= n; ++i) {
            const double len = (i < n) ? spec.h : T - static_cast<double>(n) * spec.h;
            if (len <= 1e-12 * spec.h) break;
            y = advance_step(sys, t0 + static_cast<double>(i) * spec.h, y, 0.0, len, spec);
            if (y.x < e) best = std::max(best, y.x);
        }
    }
    return best;
}

struct RefinedEvent {
    double param = 0.0;
    PeriodicOrbit orbit;     ///< converged orbit on the pre-event side of the bracket
    PeriodicOrbit orbit_hi;  ///< converged orbit on the post-event side
    int bisections = 0;
};

/// Bisection on the event indicator between two branch points whose
/// indicator signs (or impact counts) differ.
[[nodiscard]] inline RefinedEvent refine_event(const SystemDef& sys, SweepParam param,
                                               EventKind kind, const PeriodicOrbit& before,
                                               const PeriodicOrbit& after, double tol,
                                               const StepSpec& spec = {}) {
    PeriodicOrbit lo = before;
    PeriodicOrbit hi = after;
    if (kind == EventKind::PeriodDoubling &&
        detail::pd_indicator(lo) * detail::pd_indicator(hi) >= 0.0)
        throw ConfigError("refine_event: bracket does not straddle a period doubling");
    if (kind == EventKind::Grazing && lo.impacts == hi.impacts)
        throw ConfigError("refine_event: bracket does not straddle a grazing contact");
    if (kind == EventKind::Fold)
        throw ConfigError("refine_event: folds are refined along an arclength branch");

    RefinedEvent out;
    while (std::fabs(hi.param - lo.param) > tol) {
        const double mid = 0.5 * (lo.param + hi.param);
        PeriodicOrbit m = shoot_at(sys, param, mid, lo.anchor, lo.period_multiple, spec);
        ++out.bisections;
        const bool same_side = kind == EventKind::PeriodDoubling
                                   ? detail::pd_indicator(m) * detail::pd_indicator(lo) > 0.0
                                   : m.impacts == lo.impacts;
        (same_side ? lo : hi) = std::move(m);
    }
    out.param = 0.5 * (lo.param + hi.param);
    out.orbit = lo;
    out.orbit_hi = hi;
    return out;
}

/// Generic bisection on a sign-changing indicator; used where an event test
/// reduces to a scalar function of the parameter.
[[nodiscard]] inline double bisect_indicator(double lo, double hi, double tol,
                                             const std::function<double(double)>& f,
                                             int* evals = nullptr) {
    double f_lo = f(lo);
    if (evals) ++*evals;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (evals) ++*evals;
        if ((fm > 0.0) == (f_lo > 0.0)) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

struct ArclengthOptions {
    double ds = 0.01;
    double ds_min = 1e-8;
    double ds_max = 0.02;
    int max_steps = 3000;
    double param_weight = 1.0;  ///< weight of the parameter in the arclength metric
    StepSpec spec{};
};

namespace detail {

struct ExtPoint {
    Vec2 z;
    double q;
};

/// One pseudo-arclength corrector: solve P(z;q) - z = 0 together with the
/// plane constraint <w - w_pred, t> = 0.
[[nodiscard]] inline bool arclength_correct(const SystemDef& sys, SweepParam param, int p,
                                            const ExtPoint& pred, const ExtPoint& tangent,
                                            const ArclengthOptions& opt, ExtPoint& out) {
    ExtPoint w = pred;
    for (int it = 0; it < 12; ++it) {
        const SystemDef s = sys.with_param(param, w.q);
        const Vec2 g = poincare_map(s, w.z, p, opt.spec) - w.z;
        const double plane = (w.z.x - pred.z.x) * tangent.z.x + (w.z.v - pred.z.v) * tangent.z.v +
                             (w.q - pred.q) * tangent.q * opt.param_weight;
        if (!std::isfinite(g.x) || !std::isfinite(g.v)) return false;
        if (norm2(g) < kShootTol && std::fabs(plane) < 1e-12) {
            out = w;
            return true;
        }
        const Mat2 jz = poincare_jacobian(s, w.z, p, opt.spec);
        const double dq = 1e-6 * std::max(1.0, std::fabs(w.q));
        const Vec2 pq_p = poincare_map(sys.with_param(param, w.q + dq), w.z, p, opt.spec);
        const Vec2 pq_m = poincare_map(sys.with_param(param, w.q - dq), w.z, p, opt.spec);
        const Vec2 dpdq = (pq_p - pq_m) * (0.5 / dq);

        // 3x3 solve by elimination: rows (Jz - I | dpdq), tangent row
        double a[3][4] = {
            {jz.a00 - 1.0, jz.a01, dpdq.x, -g.x},
            {jz.a10, jz.a11 - 1.0, dpdq.v, -g.v},
            {tangent.z.x, tangent.z.v, tangent.q * opt.param_weight, -plane},
        };
        for (int col = 0; col < 3; ++col) {
            int piv = col;
            for (int r = col + 1; r < 3; ++r)
                if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
            if (std::fabs(a[piv][col]) < 1e-14) return false;
            std::swap(a[col], a[piv]);
            for (int r = 0; r < 3; ++r) {
                if (r == col) continue;
                const double f = a[r][col] / a[col][col];
                for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
            }
        }
        w.z.x += a[0][3] / a[0][0];
        w.z.v += a[1][3] / a[1][1];
        w.q += a[2][3] / a[2][2];
        if (std::fabs(w.q - pred.q) > 10.0 * opt.ds_max) return false;
    }
    return false;
}

}  // namespace detail

/// Pseudo-arclength continuation in (state, parameter). Rounds folds instead
/// of stalling on them, which makes it the sweep of choice for fold-bearing
/// branches; fold events are flagged where the parameter progression turns.
[[nodiscard]] inline Branch sweep_arclength(const SystemDef& sys, const PeriodicOrbit& start,
                                            SweepParam param, double q_lo, double q_hi,
                                            double initial_direction,
                                            const ArclengthOptions& opt = {}) {
    Branch branch;
    branch.swept = param;
    branch.points.push_back(start);

    const int p = start.period_multiple;
    detail::ExtPoint cur{start.anchor, start.param};

    // second point by a small natural step to seed the secant tangent
    double ds = opt.ds;
    {
        const double dq0 = (initial_direction >= 0 ? 1.0 : -1.0) * std::min(0.25 * opt.ds, 1e-3);
        PeriodicOrbit second;
        double q2 = start.param + dq0;
        try {
            second = shoot_at(sys, param, q2, start.anchor, p, opt.spec);
        } catch (const NoOrbitError&) {
            q2 = start.param + 0.1 * dq0;
            second = shoot_at(sys, param, q2, start.anchor, p, opt.spec);
        }
        detail::detect_events(branch.points.back(), second, branch, false);
        branch.points.push_back(second);
        cur = {second.anchor, second.param};
    }

    detail::ExtPoint prev{start.anchor, start.param};
    int easy = 0;
    for (int step = 0; step < opt.max_steps; ++step) {
        // secant tangent, parameter weighted
        detail::ExtPoint t{cur.z - prev.z, cur.q - prev.q};
        const double len = std::sqrt(norm2_sq(t.z) + opt.param_weight * t.q * t.q);
        if (len < 1e-15) break;
        t.z = t.z * (1.0 / len);
        t.q /= len;

        bool ok = false;
        detail::ExtPoint next{};
        while (!ok) {
            detail::ExtPoint pred{cur.z + ds * t.z, cur.q + ds * t.q};
            ok = detail::arclength_correct(sys, param, p, pred, t, opt, next);
            if (!ok) {
                ds *= 0.5;
                easy = 0;
                if (ds < opt.ds_min) {
                    branch.truncated = true;
                    branch.note = "arclength stalled at " + std::to_string(cur.q);
                    return branch;
                }
            }
        }
        if (++easy >= 3) {
            ds = std::min(ds * 1.4, opt.ds_max);
            easy = 0;
        }

        PeriodicOrbit orbit;
        try {
            orbit = shoot_at(sys, param, next.q, next.z, p, opt.spec);
        } catch (const NoOrbitError&) {
            branch.truncated = true;
            branch.note = "orbit lost at " + std::to_string(next.q);
            return branch;
        }
        // fold: the parameter progression turns around
        const double dq_prev = cur.q - prev.q;
        const double dq_next = next.q - cur.q;
        if (dq_prev * dq_next < 0.0) {
            BranchEvent ev;
            ev.kind = EventKind::Fold;
            ev.param_lo = std::min({prev.q, cur.q, next.q});
            ev.param_hi = std::max({prev.q, cur.q, next.q});
            ev.param = cur.q;
            branch.events.push_back(ev);
        }
        detail::detect_events(branch.points.back(), orbit, branch, false);
        branch.points.push_back(orbit);
        prev = cur;
        cur = next;
        if (cur.q < q_lo || cur.q > q_hi) break;
    }
    return branch;
}

/// Refine a fold flagged by sweep_arclength: re-walk the turn with small
/// steps and fit a parabola through the parameter extremum.
[[nodiscard]] inline RefinedEvent refine_fold(const SystemDef& sys, const Branch& branch,
                                              std::size_t turn_index,
                                              const ArclengthOptions& base_opt = {}) {
    if (turn_index == 0 || turn_index + 1 >= branch.points.size())
        throw ConfigError("refine_fold: turn index out of range");

    const SweepParam param = branch.swept;
    const int p = branch.points[turn_index].period_multiple;
    ArclengthOptions opt = base_opt;

    detail::ExtPoint prev{branch.points[turn_index - 1].anchor,
                          branch.points[turn_index - 1].param};
    detail::ExtPoint cur = prev;
    const double span = std::fabs(branch.points[turn_index + 1].param -
                                  branch.points[turn_index - 1].param);
    double ds = std::max(1e-6, 0.05 * std::max(span, 1e-4));

    // three passes of shrinking steps across the turn
    double q1 = 0, q2 = 0, q3 = 0;
    for (int pass = 0; pass < 3; ++pass) {
        detail::ExtPoint a = prev, b = cur;
        if (pass == 0) {
            // initialise the local walker from the two points before the turn
            a = {branch.points[turn_index - 1].anchor, branch.points[turn_index - 1].param};
            b = {branch.points[turn_index].anchor, branch.points[turn_index].param};
        }
        std::vector<detail::ExtPoint> walk{a, b};
        for (int step = 0; step < 400; ++step) {
            detail::ExtPoint t{walk.back().z - walk[walk.size() - 2].z,
                               walk.back().q - walk[walk.size() - 2].q};
            const double len = std::sqrt(norm2_sq(t.z) + opt.param_weight * t.q * t.q);
            t.z = t.z * (1.0 / len);
            t.q /= len;
            detail::ExtPoint pred{walk.back().z + ds * t.z, walk.back().q + ds * t.q};
            detail::ExtPoint next{};
            if (!detail::arclength_correct(sys, param, p, pred, t, opt, next))
                throw NoOrbitError("refine_fold: corrector failed near the turn");
            walk.push_back(next);
            const std::size_t n = walk.size();
            if (n >= 3) {
                const double d1 = walk[n - 2].q - walk[n - 3].q;
                const double d2 = walk[n - 1].q - walk[n - 2].q;
                if (d1 * d2 < 0.0) {
                    q1 = walk[n - 3].q;
                    q2 = walk[n - 2].q;
                    q3 = walk[n - 1].q;
                    prev = walk[n - 3];
                    cur = walk[n - 2];
                    break;
                }
            }
            if (step == 399) throw NoOrbitError("refine_fold: turn not re-located");
        }
        ds *= 0.1;
    }

    RefinedEvent out;
    const double denom = q1 - 2.0 * q2 + q3;
    out.param = std::fabs(denom) > 1e-18 ? q2 - (q3 - q1) * (q3 - q1) / (8.0 * denom) : q2;
    out.orbit = shoot_at(sys, param, q2, cur.z, p, base_opt.spec);
    return out;
}

/// Continue an orbit to a target parameter value with adaptive substeps.
/// Throws NoOrbitError when the family cannot be walked there.
[[nodiscard]] inline PeriodicOrbit walk_param(const SystemDef& base, SweepParam which,
                                              PeriodicOrbit orbit, double target,
                                              const StepSpec& spec = {},
                                              double max_step = 0.02) {
    // `base` carries the current value of `which`; the orbit's param tag is
    // left for the caller to manage (it may track a different parameter).
    // Substeps are capped so Newton cannot hop to a coexisting family.
    double at = base.param(which);
    const double dir = target >= at ? 1.0 : -1.0;
    double step = std::min(std::fabs(target - at), max_step);
    int guard = 0;
    while (at != target) {
        const double next =
            step >= std::fabs(target - at) ? target : at + dir * step;
        try {
            PeriodicOrbit moved = shoot(base.with_param(which, next), orbit.anchor,
                                        orbit.period_multiple, spec);
            // Newton can converge onto a coexisting family; treat a large
            // anchor jump as a failed step
            if (norm2(moved.anchor - orbit.anchor) > kAnchorHopTol)
                throw NoOrbitError("walk_param: family hop");
            moved.param = orbit.param;
            orbit = std::move(moved);
            at = next;
        } catch (const NoOrbitError&) {
            step *= 0.5;
            if (++guard > 20) throw;
        }
    }
    return orbit;
}

/// One point of a codimension-1 event locus in the (param1, param2) plane.
struct CodimOnePoint {
    double param2 = 0.0;
    double param1 = 0.0;
    bool ok = false;
};

struct CodimOneCurve {
    EventKind kind{};
    std::vector<CodimOnePoint> points;
    bool truncated = false;
};

struct CodimOneOptions {
    SweepParam param1{}, param2{};
    EventKind kind{};
    double direction = 1.0;     ///< param1 sweep direction toward the event
    double coarse_step = 0.005;
    double param1_limit = 0.0;  ///< give up the slice past this param1
    double refine_tol = 1e-4;
    double seed_margin = 0.05;  ///< family seed kept this far inside the locus
    StepSpec spec{};
};

/// Both fold parameters of an S-shaped branch at one value of the second
/// parameter, or ok = false when fewer than two folds are resolvable.
struct FoldPair {
    double param2 = 0.0;
    double lower = 0.0, upper = 0.0;
    bool ok = false;
    PeriodicOrbit interior;  ///< converged orbit between the folds
};

/// Locate the fold pair along param1 by an arclength sweep from an orbit
/// inside the coexistence wedge. The sweep rounds both turns in one pass
/// when the wedge is resolvable.
[[nodiscard]] inline FoldPair fold_pair_at(const SystemDef& sys, SweepParam param1,
                                           const PeriodicOrbit& interior_seed, double q_lo,
                                           double q_hi, const ArclengthOptions& opt = {}) {
    FoldPair out;
    out.interior = interior_seed;
    std::vector<double> folds;
    for (double dir : {+1.0, -1.0}) {
        Branch br = sweep_arclength(sys, interior_seed, param1, q_lo, q_hi, dir, opt);
        for (const auto& ev : br.events) {
            if (ev.kind != EventKind::Fold) continue;
            std::size_t turn = 0;
            for (std::size_t k = 1; k + 1 < br.points.size(); ++k)
                if (br.points[k].param == ev.param) turn = k;
            if (!turn) continue;
            try {
                folds.push_back(refine_fold(sys, br, turn, opt).param);
            } catch (const NoOrbitError&) {
                folds.push_back(ev.param);
            }
        }
        if (folds.size() >= 2) break;  // one pass already rounded both turns
    }
    if (folds.size() < 2) return out;
    auto [lo_it, hi_it] = std::minmax_element(folds.begin(), folds.end());
    out.lower = *lo_it;
    out.upper = *hi_it;
    out.ok = out.upper - out.lower > 1e-9;
    return out;
}

struct FoldRegionSlice {
    double param2 = 0.0;
    double lower = 0.0, upper = 0.0;
    bool ok = false;
};

/// Trace the fold-pair wedge over param2, re-seeding each slice from the
/// middle of the previous slice's pair. Slices after the pair becomes
/// unresolvable (past the cusp) are marked not-ok.
[[nodiscard]] inline std::vector<FoldRegionSlice> trace_fold_region(
    const SystemDef& sys, SweepParam param1, SweepParam param2,
    const PeriodicOrbit& interior_seed, const std::vector<double>& param2_grid,
    double q_lo, double q_hi, const ArclengthOptions& opt = {}) {
    std::vector<FoldRegionSlice> out;
    PeriodicOrbit seed = interior_seed;
    SystemDef base = sys;
    double cur_q2 = sys.param(param2);
    bool lost = false;
    for (double q2 : param2_grid) {
        FoldRegionSlice slice;
        slice.param2 = q2;
        if (!lost) {
            try {
                const SystemDef from =
                    base.with_param(param2, cur_q2).with_param(param1, seed.param);
                seed = walk_param(from, param2, seed, q2, opt.spec);
                base = base.with_param(param2, q2);
                cur_q2 = q2;
                auto pair = fold_pair_at(base, param1, seed, q_lo, q_hi, opt);
                if (pair.ok) {
                    slice.lower = pair.lower;
                    slice.upper = pair.upper;
                    slice.ok = true;
                    // re-seed at the wedge midpoint for the next slice
                    const double mid = 0.5 * (pair.lower + pair.upper);
                    const SystemDef at = base.with_param(param1, seed.param);
                    seed = walk_param(at, param1, seed, mid, opt.spec);
                    seed.param = mid;
                } else {
                    lost = true;
                }
            } catch (const NoOrbitError&) {
                lost = true;
            }
        }
        out.push_back(slice);
    }
    return out;
}

struct CuspEstimate {
    double param1 = 0.0;
    double param2 = 0.0;
    bool found = false;
};

/// Estimate the cusp terminating a fold wedge from traced slices: the wedge
/// width scales as (p2_c - p2)^(3/2) near the cusp, so width^(2/3) is linear
/// in param2 and extrapolates to zero at the cusp; the wedge midline is
/// linear through it.
[[nodiscard]] inline CuspEstimate locate_cusp(const std::vector<FoldRegionSlice>& slices) {
    CuspEstimate out;
    const FoldRegionSlice* a = nullptr;  // second-to-last ok slice
    const FoldRegionSlice* b = nullptr;  // last ok slice
    for (const auto& s : slices) {
        if (!s.ok) continue;
        a = b;
        b = &s;
    }
    if (!b) return out;
    if (!a) {
        out.param1 = 0.5 * (b->lower + b->upper);
        out.param2 = b->param2;
        out.found = true;
        return out;
    }
    const double wa = std::pow(a->upper - a->lower, 2.0 / 3.0);
    const double wb = std::pow(b->upper - b->lower, 2.0 / 3.0);
    const double mid_a = 0.5 * (a->lower + a->upper);
    const double mid_b = 0.5 * (b->lower + b->upper);
    const double dq = b->param2 - a->param2;
    if (wa <= wb || dq == 0.0) {
        out.param1 = mid_b;
        out.param2 = b->param2;
        out.found = true;
        return out;
    }
    out.param2 = b->param2 + wb * dq / (wa - wb);
    out.param1 = mid_b + (out.param2 - b->param2) * (mid_b - mid_a) / dq;
    out.found = true;
    return out;
}

/// Grid-scan tracing of a PD or grazing locus over param2: each slice
/// re-converges the orbit family at the new param2 (seeded from the previous
/// slice), sweeps param1 until the event indicator flips, and refines by
/// bisection. The curve truncates where the event (or the family) vanishes.
[[nodiscard]] inline CodimOneCurve trace_codim1_region(const SystemDef& sys,
                                                       const PeriodicOrbit& seed,
                                                       const std::vector<double>& param2_grid,
                                                       const CodimOneOptions& opt) {
    CodimOneCurve curve;
    curve.kind = opt.kind;
    PeriodicOrbit family = seed;  // interior orbit carried from slice to slice
    SystemDef base = sys;
    double cur_q2 = sys.param(opt.param2);

    for (double q2 : param2_grid) {
        CodimOnePoint pt;
        pt.param2 = q2;
        // walk the family seed to this slice
        try {
            const SystemDef from =
                base.with_param(opt.param2, cur_q2).with_param(opt.param1, family.param);
            family = walk_param(from, opt.param2, family, q2, opt.spec);
        } catch (const NoOrbitError&) {
            curve.truncated = true;
            curve.points.push_back(pt);
            break;
        }
        base = base.with_param(opt.param2, q2);
        cur_q2 = q2;

        // sweep param1 toward the event
        try {
            PeriodicOrbit a = family;
            bool bracketed = false;
            PeriodicOrbit b;
            while (opt.direction * (opt.param1_limit - a.param) > 0.0) {
                double q1 = a.param + opt.direction * opt.coarse_step;
                if (opt.direction * (q1 - opt.param1_limit) > 0.0) q1 = opt.param1_limit;
                b = shoot_at(base, opt.param1, q1, a.anchor, a.period_multiple, opt.spec);
                const bool flip = opt.kind == EventKind::Grazing
                                      ? a.impacts != b.impacts
                                      : detail::pd_indicator(a) * detail::pd_indicator(b) <
                                            0.0;
                if (flip) {
                    bracketed = true;
                    break;
                }
                a = b;
            }
            if (bracketed) {
                auto refined =
                    refine_event(base, opt.param1, opt.kind, a, b, opt.refine_tol, opt.spec);
                pt.param1 = refined.param;
                pt.ok = true;
            }
        } catch (const NoOrbitError&) {
            pt.ok = false;
        }
        curve.points.push_back(pt);
        if (!pt.ok) {
            curve.truncated = true;
            break;
        }
        // keep the family seed a safe margin inside the locus for the next slice
        try {
            const double inside = pt.param1 - opt.direction * opt.seed_margin;
            const SystemDef from = base.with_param(opt.param1, family.param);
            family = walk_param(from, opt.param1, family, inside, opt.spec);
            family.param = inside;
        } catch (const NoOrbitError&) {
            // keep the old seed; the next slice walk may still manage
        }
    }
    return curve;
}

}  // namespace attrswitch
