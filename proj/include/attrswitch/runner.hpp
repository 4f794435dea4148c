#pragma once

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "attrswitch/basin.hpp"
#include "attrswitch/continuation.hpp"
#include "attrswitch/control.hpp"
#include "attrswitch/csv.hpp"
#include "attrswitch/parallel.hpp"
#include "attrswitch/scenario.hpp"

namespace attrswitch {

inline constexpr const char* kToolVersion = "1.0.0";

struct RunOutcome {
    int status = 0;  // 0 success, 2 configuration error, 3 numerical failure
    std::string message;
    std::vector<std::string> files;  // artifact names relative to the output dir
    nlohmann::json summary;
};

namespace detail {

[[nodiscard]] inline nlohmann::json fingerprint_json(const Fingerprint& fp) {
    nlohmann::json j;
    j["period"] = fp.period;
    j["impacts_per_period"] = fp.impacts_per_period;
    j["contact_time"] = fp.contact_time;
    j["peak_to_peak"] = fp.peak_to_peak;
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : fp.poincare_points) pts.push_back({p.x, p.v});
    j["poincare_points"] = pts;
    return j;
}

[[nodiscard]] inline Fingerprint settle_checked(const SystemDef& sys, Vec2 ic,
                                                const SettleOptions& opt, const StepSpec& spec,
                                                const std::string& role) {
    Fingerprint fp = settle(sys, ic, opt, spec);
    if (!fp.periodic())
        throw NoOrbitError(role + " initial condition did not settle onto a periodic orbit");
    return fp;
}

[[nodiscard]] inline nlohmann::json switch_result_json(const SwitchResult& res) {
    nlohmann::json j;
    j["success"] = res.success;
    j["converged"] = res.converged;
    j["failure_reason"] = res.failure_reason;
    j["tau_engaged"] = res.tau_engaged;
    j["tau_converged"] = res.tau_converged;
    j["tau_off"] = res.tau_off;
    j["periods_to_converge"] = res.periods_to_converge;
    j["max_abs_u"] = res.max_abs_u;
    j["verify_max_delta"] = res.verify_max_delta;
    j["verify_max_pointwise"] = res.verify_max_pointwise;
    j["verify_tail_delta"] = res.verify_tail_delta;
    j["sampling_step"] = res.h_eff;
    return j;
}

struct ArtifactWriter {
    std::filesystem::path dir;
    nlohmann::json outputs = nlohmann::json::array();
    std::vector<std::string> files;

    void add(const std::string& name, const std::string& bytes) {
        write_file_atomic(dir / name, bytes);
        outputs.push_back(
            {{"file", name}, {"bytes", bytes.size()}, {"fnv1a64", fnv1a_hex(bytes)}});
        files.push_back(name);
    }
};

[[nodiscard]] inline SwitchOptions switch_options(const Scenario::SwitchCfg& sw,
                                                  int trace_stride) {
    SwitchOptions opt;
    opt.bounds = {sw.max_value, sw.max_rate};
    opt.epsilon = sw.epsilon;
    opt.engage_periods = sw.engage_periods;
    opt.max_periods = sw.max_periods;
    opt.verify_periods = sw.verify_periods;
    opt.trace_stride = trace_stride;
    return opt;
}

// Locate the adjacent branch pair bracketing an event and refine it.
[[nodiscard]] inline nlohmann::json refine_branch_events(const SystemDef& sys,
                                                         const Branch& branch,
                                                         bool arclength, double refine_tol,
                                                         const StepSpec& spec,
                                                         const ArclengthOptions& arc_opt) {
    nlohmann::json events = nlohmann::json::array();
    for (const auto& ev : branch.events) {
        nlohmann::json je;
        je["bracket_lo"] = ev.param_lo;
        je["bracket_hi"] = ev.param_hi;
        je["refined"] = false;
        je["param"] = ev.param;
        switch (ev.kind) {
            case EventKind::PeriodDoubling: je["kind"] = "period-doubling"; break;
            case EventKind::Grazing: je["kind"] = "grazing"; break;
            case EventKind::Fold: je["kind"] = "fold"; break;
        }
        try {
            if (ev.kind == EventKind::Fold) {
                if (arclength) {
                    std::size_t turn = 0;
                    for (std::size_t k = 1; k + 1 < branch.points.size(); ++k)
                        if (branch.points[k].param == ev.param) turn = k;
                    if (turn) {
                        auto r = refine_fold(sys, branch, turn, arc_opt);
                        je["param"] = r.param;
                        je["refined"] = true;
                        je["max_multiplier_mag"] = r.orbit.max_multiplier_mag();
                    }
                }
                // natural sweeps report the stall parameter as-is
            } else {
                const PeriodicOrbit* lo = nullptr;
                const PeriodicOrbit* hi = nullptr;
                for (std::size_t i = 0; i + 1 < branch.points.size(); ++i) {
                    const auto& a = branch.points[i];
                    const auto& b = branch.points[i + 1];
                    const double plo = std::min(a.param, b.param);
                    const double phi = std::max(a.param, b.param);
                    if (plo != ev.param_lo || phi != ev.param_hi) continue;
                    const bool flip = ev.kind == EventKind::Grazing
                                          ? a.impacts != b.impacts
                                          : detail::pd_indicator(a) * detail::pd_indicator(b) <
                                                0.0;
                    if (flip) {
                        lo = &a;
                        hi = &b;
                    }
                }
                if (lo) {
                    auto r = refine_event(sys, branch.swept, ev.kind, *lo, *hi, refine_tol,
                                          spec);
                    je["param"] = r.param;
                    je["refined"] = true;
                    je["max_multiplier_mag"] = r.orbit.max_multiplier_mag();
                }
            }
        } catch (const std::exception& err) {
            je["refine_error"] = err.what();
        }
        events.push_back(je);
    }
    return events;
}

}  // namespace detail

/// Execute one scenario, writing its artifacts and manifest into out_dir.
/// Numerical failures are reported through the outcome, not thrown.
[[nodiscard]] inline RunOutcome run_scenario(const Scenario& sc,
                                             const std::filesystem::path& out_dir,
                                             int workers = default_worker_count()) {
    RunOutcome outcome;
    detail::ArtifactWriter artifacts{out_dir, nlohmann::json::array(), {}};

    try {
        const SystemDef sys = sc.system();
        switch (sc.action) {
            case Action::Simulate: {
                const double tau1 = sc.sim.periods * sys.period();
                auto traj = integrate(sys, sc.sim.ic, 0.0, tau1, sc.step);
                if (sc.trace_stride > 1) {
                    Trajectory thin;
                    for (std::size_t i = 0; i < traj.size();
                         i += static_cast<std::size_t>(sc.trace_stride)) {
                        thin.times.push_back(traj.times[i]);
                        thin.states.push_back(traj.states[i]);
                        thin.controls.push_back(traj.controls[i]);
                    }
                    traj = std::move(thin);
                }
                artifacts.add("trajectory.csv", trajectory_csv(traj));
                outcome.summary = {{"samples", traj.size()},
                                   {"final", {traj.states.back().x, traj.states.back().v}}};
                break;
            }
            case Action::Basin: {
                auto registry = discover_attractors(sys, sc.basin.grid, sc.basin.seeds,
                                                    sc.settle, sc.step, workers);
                auto grid =
                    basin_grid(sys, sc.basin.grid, registry, sc.settle, sc.step, workers);
                artifacts.add("basin.csv", basin_csv(grid));

                std::vector<std::int64_t> counts(registry.size(), 0);
                std::int64_t unclassified = 0;
                for (int label : grid.labels) {
                    if (label == kUnclassified)
                        ++unclassified;
                    else
                        ++counts[static_cast<std::size_t>(label)];
                }
                nlohmann::json reg = nlohmann::json::array();
                for (const auto& fp : registry) reg.push_back(detail::fingerprint_json(fp));
                outcome.summary = {{"registry", reg},
                                   {"counts", counts},
                                   {"unclassified", unclassified}};
                artifacts.add("summary.json", outcome.summary.dump(2) + "\n");
                break;
            }
            case Action::Switch: {
                auto src = detail::settle_checked(sys, sc.sw.source_ic, sc.settle, sc.step,
                                                  "source");
                auto tgt = detail::settle_checked(sys, sc.sw.target_ic, sc.settle, sc.step,
                                                  "target");
                auto tgt_orbit = shoot(sys, tgt.anchor(), tgt.period, sc.step);
                if (!tgt_orbit.stable)
                    throw NoOrbitError("target orbit is not stable without control");
                auto src_orbit = shoot(sys, src.anchor(), src.period, sc.step);
                auto table = make_orbit_table(sys, tgt_orbit.anchor, tgt.period, sc.step.h,
                                              sc.step, sc.settle.match_tol);
                auto res = run_switch(sys, src_orbit.anchor, table,
                                      detail::switch_options(sc.sw, sc.trace_stride), sc.step);
                artifacts.add("trace.csv", switch_trace_csv(res));
                outcome.summary = detail::switch_result_json(res);
                outcome.summary["source"] = detail::fingerprint_json(src);
                outcome.summary["target"] = detail::fingerprint_json(tgt);
                artifacts.add("result.json", outcome.summary.dump(2) + "\n");
                if (!res.success) {
                    outcome.status = 3;
                    outcome.message = "switch failed: " + res.failure_reason;
                }
                break;
            }
            case Action::Cycle: {
                const std::size_t n = sc.cycle.stops.size();
                std::vector<PeriodicOrbit> orbits;
                std::vector<Fingerprint> prints;
                for (std::size_t k = 0; k < n; ++k) {
                    auto fp = detail::settle_checked(sys, sc.cycle.stops[k], sc.settle,
                                                     sc.step, "stop " + std::to_string(k));
                    orbits.push_back(shoot(sys, fp.anchor(), fp.period, sc.step));
                    prints.push_back(std::move(fp));
                }
                Scenario::SwitchCfg leg_cfg;
                leg_cfg.max_value = sc.cycle.max_value;
                leg_cfg.max_rate = sc.cycle.max_rate;
                leg_cfg.epsilon = sc.cycle.epsilon;
                leg_cfg.engage_periods = sc.cycle.engage_periods;
                leg_cfg.max_periods = sc.cycle.max_periods;
                leg_cfg.verify_periods = sc.cycle.verify_periods;

                nlohmann::json legs = nlohmann::json::array();
                bool all_ok = true;
                Vec2 y = orbits[0].anchor;
                double tau_cursor = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const std::size_t tgt = (k + 1) % n;
                    auto table = make_orbit_table(sys, orbits[tgt].anchor,
                                                  prints[tgt].period, sc.step.h, sc.step,
                                                  sc.settle.match_tol);
                    SwitchOptions opt = detail::switch_options(leg_cfg, sc.trace_stride);
                    // align the leg start on the new sampling grid
                    const double h = table.step;
                    const double tau0 =
                        std::ceil(tau_cursor / h - 1e-9) * h;
                    if (tau0 > tau_cursor) {
                        StepSpec spec = sc.step;
                        spec.h = h;
                        y = advance_step(sys, tau_cursor, y, 0.0, tau0 - tau_cursor, spec);
                    }
                    opt.tau0 = tau0;
                    auto res = run_switch(sys, y, table, opt, sc.step);
                    artifacts.add("trace-leg" + std::to_string(k + 1) + ".csv",
                                  switch_trace_csv(res));
                    nlohmann::json leg = detail::switch_result_json(res);
                    leg["target_period"] = prints[tgt].period;
                    legs.push_back(leg);
                    all_ok = all_ok && res.success;
                    if (!res.success) break;
                    y = res.final_state;
                    tau_cursor = res.final_tau;
                }
                outcome.summary = {{"legs", legs}, {"success", all_ok}};
                artifacts.add("result.json", outcome.summary.dump(2) + "\n");
                if (!all_ok) {
                    outcome.status = 3;
                    outcome.message = "cycle leg failed";
                }
                break;
            }
            case Action::Sweep: {
                auto fp = detail::settle_checked(sys, sc.sweep.start_ic, sc.settle, sc.step,
                                                 "sweep start");
                auto start = shoot(sys, fp.anchor(), fp.period, sc.step);
                start.param = sys.param(sc.sweep.param);

                ArclengthOptions arc_opt;
                arc_opt.spec = sc.step;
                std::vector<Branch> branches;
                if (sc.sweep.arclength) {
                    branches.push_back(sweep_arclength(sys, start, sc.sweep.param,
                                                       sc.sweep.arc_lo, sc.sweep.arc_hi,
                                                       sc.sweep.arc_direction, arc_opt));
                } else {
                    SweepOptions so;
                    so.dstep = sc.sweep.dstep;
                    so.spec = sc.step;
                    branches.push_back(sweep(sys, start, sc.sweep.param, sc.sweep.to, so));
                    if (sc.sweep.has_also_to)
                        branches.push_back(
                            sweep(sys, start, sc.sweep.param, sc.sweep.also_to, so));
                }

                nlohmann::json events = nlohmann::json::array();
                Branch merged;
                merged.swept = sc.sweep.param;
                for (const auto& br : branches) {
                    auto part = detail::refine_branch_events(
                        sys, br, sc.sweep.arclength, sc.sweep.refine_tol, sc.step, arc_opt);
                    for (auto& e : part) events.push_back(e);
                    merged.points.insert(merged.points.end(), br.points.begin(),
                                         br.points.end());
                    merged.truncated = merged.truncated || br.truncated;
                    if (!br.note.empty()) merged.note += br.note + "; ";
                }
                std::sort(merged.points.begin(), merged.points.end(),
                          [](const PeriodicOrbit& a, const PeriodicOrbit& b) {
                              return a.param < b.param;
                          });
                artifacts.add("branch.csv", branch_csv(merged, sc.kind));
                outcome.summary = {{"events", events},
                                   {"points", merged.points.size()},
                                   {"truncated", merged.truncated},
                                   {"note", merged.note}};
                artifacts.add("events.json", outcome.summary.dump(2) + "\n");
                break;
            }
            case Action::Region: {
                std::vector<double> grid;
                for (int i = 0; i < sc.region.slices; ++i)
                    grid.push_back(sc.region.from + (sc.region.to - sc.region.from) * i /
                                                        std::max(1, sc.region.slices - 1));
                if (sc.kind == SystemKind::SoftImpact) {
                    auto fp2 = detail::settle_checked(sys, sc.region.seed_ic, sc.settle,
                                                      sc.step, "seed");
                    auto fp5 = detail::settle_checked(sys, sc.region.seed_ic2, sc.settle,
                                                      sc.step, "seed2");
                    auto o2 = shoot(sys, fp2.anchor(), fp2.period, sc.step);
                    o2.param = sys.param(SweepParam::ForcingAmp);
                    auto o5 = shoot(sys, fp5.anchor(), fp5.period, sc.step);
                    o5.param = o2.param;

                    auto locus = [&](const PeriodicOrbit& seed, EventKind kind, double dir,
                                     double limit) {
                        CodimOneOptions co;
                        co.param1 = SweepParam::ForcingAmp;
                        co.param2 = SweepParam::Gap;
                        co.kind = kind;
                        co.direction = dir;
                        co.coarse_step = 0.01;
                        co.param1_limit = limit;
                        co.seed_margin = 0.08;
                        co.spec = sc.step;
                        return trace_codim1_region(sys, seed, grid, co);
                    };
                    auto pd1 = locus(o2, EventKind::PeriodDoubling, -1.0, sc.region.sweep_lo);
                    auto gr1 = locus(o2, EventKind::Grazing, +1.0, sc.region.sweep_hi);
                    auto pd2 = locus(o5, EventKind::PeriodDoubling, -1.0, sc.region.sweep_lo);
                    auto gr2 = locus(o5, EventKind::Grazing, +1.0, sc.region.sweep_hi);

                    std::string csv =
                        "param2,pd1,gr1,pd2,gr2,coexist_lo,coexist_hi,complete\n";
                    auto value_at = [](const CodimOneCurve& c, std::size_t i) {
                        return i < c.points.size() && c.points[i].ok
                                   ? c.points[i].param1
                                   : std::numeric_limits<double>::quiet_NaN();
                    };
                    for (std::size_t i = 0; i < grid.size(); ++i) {
                        const double a_pd1 = value_at(pd1, i), a_gr1 = value_at(gr1, i);
                        const double a_pd2 = value_at(pd2, i), a_gr2 = value_at(gr2, i);
                        const bool complete = std::isfinite(a_pd1) && std::isfinite(a_gr1) &&
                                              std::isfinite(a_pd2) && std::isfinite(a_gr2);
                        const double lo = complete ? std::max(a_pd1, a_pd2) : 0.0;
                        const double hi = complete ? std::min(a_gr1, a_gr2) : 0.0;
                        csv += fmt17(grid[i]) + ',' + fmt17(a_pd1) + ',' + fmt17(a_gr1) + ',' +
                               fmt17(a_pd2) + ',' + fmt17(a_gr2) + ',' +
                               (complete ? fmt17(lo) : "nan") + ',' +
                               (complete ? fmt17(hi) : "nan") + ',' +
                               (complete ? "1" : "0") + '\n';
                    }
                    artifacts.add("region.csv", csv);
                    outcome.summary = {
                        {"slices", grid.size()},
                        {"pd1_truncated", pd1.truncated},
                        {"gr1_truncated", gr1.truncated},
                        {"pd2_truncated", pd2.truncated},
                        {"gr2_truncated", gr2.truncated},
                    };
                    artifacts.add("region.json", outcome.summary.dump(2) + "\n");
                } else {
                    auto fp = detail::settle_checked(sys, sc.region.seed_ic, sc.settle,
                                                     sc.step, "seed");
                    auto seed = shoot(sys, fp.anchor(), fp.period, sc.step);
                    seed.param = sys.param(SweepParam::Damping);
                    ArclengthOptions arc_opt;
                    arc_opt.spec = sc.step;
                    auto slices = trace_fold_region(sys, SweepParam::Damping,
                                                    SweepParam::Stiffness, seed, grid,
                                                    sc.region.sweep_lo, sc.region.sweep_hi,
                                                    arc_opt);
                    auto cusp = locate_cusp(slices);
                    std::string csv = "param2,fold_lo,fold_hi,ok\n";
                    for (const auto& s : slices)
                        csv += fmt17(s.param2) + ',' +
                               (s.ok ? fmt17(s.lower) : "nan") + ',' +
                               (s.ok ? fmt17(s.upper) : "nan") + ',' + (s.ok ? "1" : "0") +
                               '\n';
                    artifacts.add("region.csv", csv);
                    outcome.summary = {{"cusp_found", cusp.found},
                                       {"cusp_p1", cusp.param1},
                                       {"cusp_p2", cusp.param2}};
                    artifacts.add("region.json", outcome.summary.dump(2) + "\n");
                }
                break;
            }
        }
    } catch (const ConfigError& err) {
        outcome.status = 2;
        outcome.message = err.what();
        return outcome;
    } catch (const std::exception& err) {
        outcome.status = 3;
        outcome.message = err.what();
        return outcome;
    }

    nlohmann::json manifest;
    manifest["tool"] = "attrswitch";
    manifest["version"] = kToolVersion;
    manifest["scenario"] = scenario_to_json(sc);
    manifest["figure"] = sc.figure;
    manifest["status"] = outcome.status;
    manifest["message"] = outcome.message;
    manifest["outputs"] = artifacts.outputs;
    manifest["summary"] = outcome.summary;
    write_file_atomic(out_dir / "manifest.json", manifest.dump(2) + "\n");
    outcome.files = artifacts.files;
    outcome.files.push_back("manifest.json");
    return outcome;
}

struct VerifyOutcome {
    bool ok = false;
    std::string message;
};

/// Re-run the manifest's scenario into a scratch directory and require every
/// recorded artifact to come back byte-identical.
[[nodiscard]] inline VerifyOutcome verify_manifest(const std::filesystem::path& manifest_path,
                                                   int workers = default_worker_count()) {
    VerifyOutcome out;
    nlohmann::json manifest = nlohmann::json::parse(read_file(manifest_path));
    Scenario sc = scenario_from_json(manifest.at("scenario"));

    const std::filesystem::path tmp =
        std::filesystem::temp_directory_path() /
        ("attrswitch-verify-" + sc.name + "-" + std::to_string(::getpid()));
    std::filesystem::remove_all(tmp);
    auto rerun = run_scenario(sc, tmp, workers);
    if (rerun.status != manifest.at("status").get<int>()) {
        out.message = "status changed: " + std::to_string(rerun.status) + " vs " +
                      std::to_string(manifest.at("status").get<int>());
        std::filesystem::remove_all(tmp);
        return out;
    }
    std::string mismatches;
    for (const auto& rec : manifest.at("outputs")) {
        const std::string name = rec.at("file").get<std::string>();
        const std::string bytes = read_file(tmp / name);
        if (fnv1a_hex(bytes) != rec.at("fnv1a64").get<std::string>() ||
            bytes.size() != rec.at("bytes").get<std::size_t>())
            mismatches += name + " ";
    }
    std::filesystem::remove_all(tmp);
    if (!mismatches.empty()) {
        out.message = "artifacts differ: " + mismatches;
        return out;
    }
    out.ok = true;
    out.message = "all artifacts byte-identical";
    return out;
}

}  // namespace attrswitch
