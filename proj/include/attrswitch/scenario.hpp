#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "attrswitch/basin.hpp"
#include "attrswitch/config.hpp"
#include "attrswitch/errors.hpp"
#include "attrswitch/integrate.hpp"
#include "attrswitch/systems.hpp"

namespace attrswitch {

enum class Action { Simulate, Basin, Switch, Cycle, Sweep, Region };

[[nodiscard]] inline std::string to_string(Action a) {
    switch (a) {
        case Action::Simulate: return "simulate";
        case Action::Basin: return "basin";
        case Action::Switch: return "switch";
        case Action::Cycle: return "cycle";
        case Action::Sweep: return "sweep";
        case Action::Region: return "region";
    }
    return "?";
}

/// A fully resolved experiment description. Every knob is recorded here so a
/// run is re-creatable from its manifest alone.
struct Scenario {
    std::string name;
    std::string figure;  // figure tag of the plot this run reproduces, if any
    Action action = Action::Simulate;

    SystemKind kind = SystemKind::SoftImpact;
    ImpactParams impact{0.01, 1.26, 0.7, 28.0, 0.85};
    DuffingParams duffing{1.9, 1.2, 0.9, 1.0};
    ControlChannel channel = ControlChannel::AdditiveForce;
    StepSpec step{};
    SettleOptions settle{};
    int trace_stride = 1;
    std::string output_dir;  // defaults to out/<name>

    struct SimulateCfg {
        Vec2 ic{};
        double periods = 80.0;
    } sim;

    struct BasinCfg {
        BasinSpec grid{};
        int seeds = 100;
    } basin;

    struct SwitchCfg {
        Vec2 source_ic{};
        Vec2 target_ic{};
        double max_value = 1.0;
        double max_rate = 1.0;
        double epsilon = 1e-3;
        double engage_periods = 80.0;
        double max_periods = 200.0;
        double verify_periods = 50.0;
    } sw;

    struct CycleCfg {
        std::vector<Vec2> stops;
        double max_value = 0.2;
        double max_rate = 10.0;
        double epsilon = 1e-3;
        double engage_periods = 80.0;
        double max_periods = 200.0;
        double verify_periods = 50.0;
    } cycle;

    struct SweepCfg {
        SweepParam param = SweepParam::ForcingAmp;
        Vec2 start_ic{};
        double to = 0.0;
        double also_to = 0.0;  // optional second sweep direction; 0 disables
        bool has_also_to = false;
        double dstep = 0.002;
        bool arclength = false;
        double arc_lo = 0.0;
        double arc_hi = 0.0;
        double arc_direction = 1.0;
        double refine_tol = 1e-4;
    } sweep;

    struct RegionCfg {
        double from = 0.0;
        double to = 0.0;
        int slices = 40;
        Vec2 seed_ic{};
        Vec2 seed_ic2{};        // second orbit family (impact region)
        double sweep_lo = 0.0;  // param1 window searched for events
        double sweep_hi = 0.0;
    } region;

    [[nodiscard]] SystemDef system() const {
        return kind == SystemKind::SoftImpact ? SystemDef::soft_impact(impact, channel)
                                              : SystemDef::duffing(duffing, channel);
    }

    [[nodiscard]] std::string resolved_output_dir() const {
        return output_dir.empty() ? "out/" + name : output_dir;
    }
};

namespace detail {

[[nodiscard]] inline Action action_from(const std::string& s) {
    if (s == "simulate") return Action::Simulate;
    if (s == "basin") return Action::Basin;
    if (s == "switch") return Action::Switch;
    if (s == "cycle") return Action::Cycle;
    if (s == "sweep") return Action::Sweep;
    if (s == "region") return Action::Region;
    throw ConfigError("unknown action '" + s + "'");
}

[[nodiscard]] inline SystemKind kind_from(const std::string& s) {
    if (s == "soft-impact") return SystemKind::SoftImpact;
    if (s == "duffing") return SystemKind::Duffing;
    throw ConfigError("unknown system kind '" + s + "'");
}

[[nodiscard]] inline ControlChannel channel_from(const std::string& s) {
    if (s == "additive-force") return ControlChannel::AdditiveForce;
    if (s == "forcing-amplitude") return ControlChannel::ForcingAmplitude;
    if (s == "gap") return ControlChannel::Gap;
    if (s == "cubic-stiffness") return ControlChannel::CubicStiffness;
    throw ConfigError("unknown control channel '" + s + "'");
}

[[nodiscard]] inline SweepParam sweep_param_from(const std::string& s) {
    if (s == "a") return SweepParam::ForcingAmp;
    if (s == "e") return SweepParam::Gap;
    if (s == "p1") return SweepParam::Damping;
    if (s == "p2") return SweepParam::Stiffness;
    throw ConfigError("unknown sweep parameter '" + s + "' (expected a, e, p1 or p2)");
}

[[nodiscard]] inline bool bool_from(const std::string& s, const std::string& where) {
    if (s == "true") return true;
    if (s == "false") return false;
    throw ConfigError(where + ": expected true or false, got '" + s + "'");
}

[[nodiscard]] inline std::vector<Vec2> stops_from(const std::string& s) {
    std::vector<Vec2> stops;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t semi = s.find(';', pos);
        if (semi == std::string::npos) semi = s.size();
        const std::string item = s.substr(pos, semi - pos);
        if (item.find_first_not_of(" \t") != std::string::npos)
            stops.push_back(Config::to_vec2(item, "cycle", "stops"));
        pos = semi + 1;
    }
    if (stops.size() < 2) throw ConfigError("[cycle] stops: need at least two states");
    return stops;
}

}  // namespace detail

/// Parse a scenario from config text. Unknown keys are errors.
[[nodiscard]] inline Scenario parse_scenario(const std::string& text) {
    const Config cfg = Config::parse(text);
    Scenario sc;

    sc.name = cfg.require("scenario", "name");
    sc.action = detail::action_from(cfg.require("scenario", "action"));
    sc.figure = cfg.get_or("scenario", "figure", "");
    sc.output_dir = cfg.get_or("scenario", "output_dir", "");
    sc.trace_stride = cfg.int_or("scenario", "trace_stride", 1);
    if (sc.trace_stride < 1) throw ConfigError("[scenario] trace_stride must be >= 1");

    sc.kind = detail::kind_from(cfg.require("system", "kind"));
    sc.channel = detail::channel_from(cfg.require("system", "channel"));
    if (sc.kind == SystemKind::SoftImpact) {
        sc.impact.zeta = cfg.require_double("system", "zeta");
        sc.impact.e = cfg.require_double("system", "e");
        sc.impact.a = cfg.require_double("system", "a");
        sc.impact.beta = cfg.require_double("system", "beta");
        sc.impact.omega = cfg.require_double("system", "omega");
    } else {
        sc.duffing.Gamma = cfg.require_double("system", "gamma");
        sc.duffing.omega = cfg.require_double("system", "omega");
        sc.duffing.p1 = cfg.require_double("system", "p1");
        sc.duffing.p2 = cfg.require_double("system", "p2");
    }

    sc.step.h = cfg.double_or("integrate", "h", sc.step.h);
    sc.step.surface_tol = cfg.double_or("integrate", "surface_tol", sc.step.surface_tol);
    sc.step.max_bisect = cfg.int_or("integrate", "max_bisect", sc.step.max_bisect);

    sc.settle.n_transient = cfg.int_or("settle", "n_transient", sc.settle.n_transient);
    sc.settle.n_sample = cfg.int_or("settle", "n_sample", sc.settle.n_sample);
    sc.settle.p_max = cfg.int_or("settle", "p_max", sc.settle.p_max);
    sc.settle.match_tol = cfg.double_or("settle", "match_tol", sc.settle.match_tol);

    switch (sc.action) {
        case Action::Simulate:
            sc.sim.ic = cfg.require_vec2("simulate", "ic");
            sc.sim.periods = cfg.double_or("simulate", "periods", sc.sim.periods);
            break;
        case Action::Basin:
            sc.basin.grid.x_min = cfg.double_or("basin", "x_min", sc.basin.grid.x_min);
            sc.basin.grid.x_max = cfg.double_or("basin", "x_max", sc.basin.grid.x_max);
            sc.basin.grid.v_min = cfg.double_or("basin", "v_min", sc.basin.grid.v_min);
            sc.basin.grid.v_max = cfg.double_or("basin", "v_max", sc.basin.grid.v_max);
            sc.basin.grid.nx = cfg.int_or("basin", "nx", sc.basin.grid.nx);
            sc.basin.grid.nv = cfg.int_or("basin", "nv", sc.basin.grid.nv);
            sc.basin.seeds = cfg.int_or("basin", "seeds", sc.basin.seeds);
            break;
        case Action::Switch:
            sc.sw.source_ic = cfg.require_vec2("switch", "source");
            sc.sw.target_ic = cfg.require_vec2("switch", "target");
            sc.sw.max_value = cfg.require_double("switch", "max_value");
            sc.sw.max_rate = cfg.require_double("switch", "max_rate");
            sc.sw.epsilon = cfg.double_or("switch", "epsilon", sc.sw.epsilon);
            sc.sw.engage_periods =
                cfg.double_or("switch", "engage_periods", sc.sw.engage_periods);
            sc.sw.max_periods = cfg.double_or("switch", "max_periods", sc.sw.max_periods);
            sc.sw.verify_periods =
                cfg.double_or("switch", "verify_periods", sc.sw.verify_periods);
            break;
        case Action::Cycle:
            sc.cycle.stops = detail::stops_from(cfg.require("cycle", "stops"));
            sc.cycle.max_value = cfg.require_double("cycle", "max_value");
            sc.cycle.max_rate = cfg.require_double("cycle", "max_rate");
            sc.cycle.epsilon = cfg.double_or("cycle", "epsilon", sc.cycle.epsilon);
            sc.cycle.engage_periods =
                cfg.double_or("cycle", "engage_periods", sc.cycle.engage_periods);
            sc.cycle.max_periods = cfg.double_or("cycle", "max_periods", sc.cycle.max_periods);
            sc.cycle.verify_periods =
                cfg.double_or("cycle", "verify_periods", sc.cycle.verify_periods);
            break;
        case Action::Sweep:
            sc.sweep.param = detail::sweep_param_from(cfg.require("sweep", "param"));
            sc.sweep.start_ic = cfg.require_vec2("sweep", "start");
            sc.sweep.arclength =
                detail::bool_from(cfg.get_or("sweep", "arclength", "false"), "[sweep] arclength");
            if (sc.sweep.arclength) {
                sc.sweep.arc_lo = cfg.require_double("sweep", "arc_lo");
                sc.sweep.arc_hi = cfg.require_double("sweep", "arc_hi");
                sc.sweep.arc_direction = cfg.double_or("sweep", "direction", 1.0);
            } else {
                sc.sweep.to = cfg.require_double("sweep", "to");
                sc.sweep.has_also_to = cfg.has("sweep", "also_to");
                if (sc.sweep.has_also_to)
                    sc.sweep.also_to = cfg.require_double("sweep", "also_to");
            }
            sc.sweep.dstep = cfg.double_or("sweep", "dstep", sc.sweep.dstep);
            sc.sweep.refine_tol = cfg.double_or("sweep", "refine_tol", sc.sweep.refine_tol);
            break;
        case Action::Region:
            sc.region.from = cfg.require_double("region", "from");
            sc.region.to = cfg.require_double("region", "to");
            sc.region.slices = cfg.int_or("region", "slices", sc.region.slices);
            sc.region.seed_ic = cfg.require_vec2("region", "seed");
            if (sc.kind == SystemKind::SoftImpact)
                sc.region.seed_ic2 = cfg.require_vec2("region", "seed2");
            sc.region.sweep_lo = cfg.require_double("region", "sweep_lo");
            sc.region.sweep_hi = cfg.require_double("region", "sweep_hi");
            break;
    }

    cfg.reject_unconsumed();
    (void)sc.system();  // validate parameters and channel compatibility
    return sc;
}

// ---------------------------------------------------------------------------
// JSON round trip (manifests)

[[nodiscard]] inline nlohmann::json scenario_to_json(const Scenario& sc) {
    nlohmann::json j;
    j["name"] = sc.name;
    j["figure"] = sc.figure;
    j["action"] = to_string(sc.action);
    j["trace_stride"] = sc.trace_stride;
    j["output_dir"] = sc.output_dir;
    j["system"]["kind"] = to_string(sc.kind);
    j["system"]["channel"] = to_string(sc.channel);
    if (sc.kind == SystemKind::SoftImpact) {
        j["system"]["zeta"] = sc.impact.zeta;
        j["system"]["e"] = sc.impact.e;
        j["system"]["a"] = sc.impact.a;
        j["system"]["beta"] = sc.impact.beta;
        j["system"]["omega"] = sc.impact.omega;
    } else {
        j["system"]["gamma"] = sc.duffing.Gamma;
        j["system"]["omega"] = sc.duffing.omega;
        j["system"]["p1"] = sc.duffing.p1;
        j["system"]["p2"] = sc.duffing.p2;
    }
    j["integrate"] = {{"h", sc.step.h},
                      {"surface_tol", sc.step.surface_tol},
                      {"max_bisect", sc.step.max_bisect}};
    j["settle"] = {{"n_transient", sc.settle.n_transient},
                   {"n_sample", sc.settle.n_sample},
                   {"p_max", sc.settle.p_max},
                   {"match_tol", sc.settle.match_tol}};
    switch (sc.action) {
        case Action::Simulate:
            j["simulate"] = {{"ic", {sc.sim.ic.x, sc.sim.ic.v}}, {"periods", sc.sim.periods}};
            break;
        case Action::Basin:
            j["basin"] = {{"x_min", sc.basin.grid.x_min}, {"x_max", sc.basin.grid.x_max},
                          {"v_min", sc.basin.grid.v_min}, {"v_max", sc.basin.grid.v_max},
                          {"nx", sc.basin.grid.nx},       {"nv", sc.basin.grid.nv},
                          {"seeds", sc.basin.seeds}};
            break;
        case Action::Switch:
            j["switch"] = {{"source", {sc.sw.source_ic.x, sc.sw.source_ic.v}},
                           {"target", {sc.sw.target_ic.x, sc.sw.target_ic.v}},
                           {"max_value", sc.sw.max_value},
                           {"max_rate", sc.sw.max_rate},
                           {"epsilon", sc.sw.epsilon},
                           {"engage_periods", sc.sw.engage_periods},
                           {"max_periods", sc.sw.max_periods},
                           {"verify_periods", sc.sw.verify_periods}};
            break;
        case Action::Cycle: {
            nlohmann::json stops = nlohmann::json::array();
            for (const auto& s : sc.cycle.stops) stops.push_back({s.x, s.v});
            j["cycle"] = {{"stops", stops},
                          {"max_value", sc.cycle.max_value},
                          {"max_rate", sc.cycle.max_rate},
                          {"epsilon", sc.cycle.epsilon},
                          {"engage_periods", sc.cycle.engage_periods},
                          {"max_periods", sc.cycle.max_periods},
                          {"verify_periods", sc.cycle.verify_periods}};
            break;
        }
        case Action::Sweep:
            j["sweep"] = {{"param", to_string(sc.sweep.param)},
                          {"start", {sc.sweep.start_ic.x, sc.sweep.start_ic.v}},
                          {"to", sc.sweep.to},
                          {"also_to", sc.sweep.also_to},
                          {"has_also_to", sc.sweep.has_also_to},
                          {"dstep", sc.sweep.dstep},
                          {"arclength", sc.sweep.arclength},
                          {"arc_lo", sc.sweep.arc_lo},
                          {"arc_hi", sc.sweep.arc_hi},
                          {"direction", sc.sweep.arc_direction},
                          {"refine_tol", sc.sweep.refine_tol}};
            break;
        case Action::Region:
            j["region"] = {{"from", sc.region.from},
                           {"to", sc.region.to},
                           {"slices", sc.region.slices},
                           {"seed", {sc.region.seed_ic.x, sc.region.seed_ic.v}},
                           {"seed2", {sc.region.seed_ic2.x, sc.region.seed_ic2.v}},
                           {"sweep_lo", sc.region.sweep_lo},
                           {"sweep_hi", sc.region.sweep_hi}};
            break;
    }
    return j;
}

[[nodiscard]] inline Scenario scenario_from_json(const nlohmann::json& j) {
    Scenario sc;
    sc.name = j.at("name").get<std::string>();
    sc.figure = j.value("figure", "");
    sc.action = detail::action_from(j.at("action").get<std::string>());
    sc.trace_stride = j.value("trace_stride", 1);
    sc.output_dir = j.value("output_dir", "");
    const auto& sys = j.at("system");
    sc.kind = detail::kind_from(sys.at("kind").get<std::string>());
    sc.channel = detail::channel_from(sys.at("channel").get<std::string>());
    if (sc.kind == SystemKind::SoftImpact) {
        sc.impact = {sys.at("zeta").get<double>(), sys.at("e").get<double>(),
                     sys.at("a").get<double>(), sys.at("beta").get<double>(),
                     sys.at("omega").get<double>()};
    } else {
        sc.duffing = {sys.at("gamma").get<double>(), sys.at("omega").get<double>(),
                      sys.at("p1").get<double>(), sys.at("p2").get<double>()};
    }
    const auto& stp = j.at("integrate");
    sc.step.h = stp.at("h").get<double>();
    sc.step.surface_tol = stp.at("surface_tol").get<double>();
    sc.step.max_bisect = stp.at("max_bisect").get<int>();
    const auto& stl = j.at("settle");
    sc.settle.n_transient = stl.at("n_transient").get<int>();
    sc.settle.n_sample = stl.at("n_sample").get<int>();
    sc.settle.p_max = stl.at("p_max").get<int>();
    sc.settle.match_tol = stl.at("match_tol").get<double>();

    auto vec2_at = [](const nlohmann::json& a) {
        return Vec2{a.at(0).get<double>(), a.at(1).get<double>()};
    };
    switch (sc.action) {
        case Action::Simulate:
            sc.sim.ic = vec2_at(j.at("simulate").at("ic"));
            sc.sim.periods = j.at("simulate").at("periods").get<double>();
            break;
        case Action::Basin: {
            const auto& b = j.at("basin");
            sc.basin.grid = {b.at("x_min").get<double>(), b.at("x_max").get<double>(),
                             b.at("v_min").get<double>(), b.at("v_max").get<double>(),
                             b.at("nx").get<int>(),       b.at("nv").get<int>()};
            sc.basin.seeds = b.at("seeds").get<int>();
            break;
        }
        case Action::Switch: {
            const auto& s = j.at("switch");
            sc.sw.source_ic = vec2_at(s.at("source"));
            sc.sw.target_ic = vec2_at(s.at("target"));
            sc.sw.max_value = s.at("max_value").get<double>();
            sc.sw.max_rate = s.at("max_rate").get<double>();
            sc.sw.epsilon = s.at("epsilon").get<double>();
            sc.sw.engage_periods = s.at("engage_periods").get<double>();
            sc.sw.max_periods = s.at("max_periods").get<double>();
            sc.sw.verify_periods = s.at("verify_periods").get<double>();
            break;
        }
        case Action::Cycle: {
            const auto& c = j.at("cycle");
            for (const auto& s : c.at("stops")) sc.cycle.stops.push_back(vec2_at(s));
            sc.cycle.max_value = c.at("max_value").get<double>();
            sc.cycle.max_rate = c.at("max_rate").get<double>();
            sc.cycle.epsilon = c.at("epsilon").get<double>();
            sc.cycle.engage_periods = c.at("engage_periods").get<double>();
            sc.cycle.max_periods = c.at("max_periods").get<double>();
            sc.cycle.verify_periods = c.at("verify_periods").get<double>();
            break;
        }
        case Action::Sweep: {
            const auto& s = j.at("sweep");
            sc.sweep.param = detail::sweep_param_from(s.at("param").get<std::string>());
            sc.sweep.start_ic = vec2_at(s.at("start"));
            sc.sweep.to = s.at("to").get<double>();
            sc.sweep.also_to = s.at("also_to").get<double>();
            sc.sweep.has_also_to = s.at("has_also_to").get<bool>();
            sc.sweep.dstep = s.at("dstep").get<double>();
            sc.sweep.arclength = s.at("arclength").get<bool>();
            sc.sweep.arc_lo = s.at("arc_lo").get<double>();
            sc.sweep.arc_hi = s.at("arc_hi").get<double>();
            sc.sweep.arc_direction = s.at("direction").get<double>();
            sc.sweep.refine_tol = s.at("refine_tol").get<double>();
            break;
        }
        case Action::Region: {
            const auto& r = j.at("region");
            sc.region.from = r.at("from").get<double>();
            sc.region.to = r.at("to").get<double>();
            sc.region.slices = r.at("slices").get<int>();
            sc.region.seed_ic = vec2_at(r.at("seed"));
            sc.region.seed_ic2 = vec2_at(r.at("seed2"));
            sc.region.sweep_lo = r.at("sweep_lo").get<double>();
            sc.region.sweep_hi = r.at("sweep_hi").get<double>();
            break;
        }
    }
    (void)sc.system();
    return sc;
}

// ---------------------------------------------------------------------------
// Built-in scenarios

namespace builtin {

// points on the reference attractors at stroboscopic phase 0
inline constexpr Vec2 kImpactP5{-0.882946966163, 0.648017446776};
inline constexpr Vec2 kImpactP2{-0.618641287115, 1.022020054969};
inline constexpr Vec2 kDuffingLarge{-1.727144697908, -0.565610646638};
inline constexpr Vec2 kDuffingSmall{-0.440537310617, -0.934112069156};
inline constexpr Vec2 kThreeP7Large{0.421533240626, 0.914637378241};
inline constexpr Vec2 kThreeP7Small{0.230420169639, 0.829513237299};
inline constexpr Vec2 kThreeP3{-0.147294718050, 1.092085991351};
inline constexpr Vec2 kDuffingLargeP08{-1.838706757569, 1.049464019941};

inline constexpr ImpactParams kImpactRef{0.01, 1.26, 0.7, 28.0, 0.85};
inline constexpr ImpactParams kImpactThree{0.01, 1.28, 0.49, 28.0, 0.8528};
inline constexpr DuffingParams kDuffingRef{1.9, 1.2, 0.9, 1.0};

}  // namespace builtin

/// The named experiments bundled with the tool, each tagged with the figure
/// of the study it reproduces.
[[nodiscard]] inline std::vector<Scenario> builtin_scenarios() {
    using namespace builtin;
    std::vector<Scenario> out;

    auto impact_switch = [&](const std::string& name, const std::string& figure,
                             ControlChannel ch, Vec2 src, Vec2 tgt, double m1, double m2) {
        Scenario sc;
        sc.name = name;
        sc.figure = figure;
        sc.action = Action::Switch;
        sc.kind = SystemKind::SoftImpact;
        sc.impact = kImpactRef;
        sc.channel = ch;
        sc.sw.source_ic = src;
        sc.sw.target_ic = tgt;
        sc.sw.max_value = m1;
        sc.sw.max_rate = m2;
        out.push_back(sc);
    };

    {
        Scenario sc;
        sc.name = "simulate-impact-transient";
        sc.figure = "";
        sc.action = Action::Simulate;
        sc.kind = SystemKind::SoftImpact;
        sc.impact = kImpactRef;
        sc.channel = ControlChannel::AdditiveForce;
        sc.sim.ic = {0.0, 0.0};
        sc.sim.periods = 80.0;
        out.push_back(sc);
    }
    {
        Scenario sc;
        sc.name = "basin-impact-default";
        sc.figure = "Fig. 2";
        sc.action = Action::Basin;
        sc.kind = SystemKind::SoftImpact;
        sc.impact = kImpactRef;
        sc.channel = ControlChannel::AdditiveForce;
        out.push_back(sc);

        sc.name = "basin-impact-quick";
        sc.figure = "Fig. 2 (reduced resolution)";
        sc.basin.grid.nx = 100;
        sc.basin.grid.nv = 100;
        sc.settle.n_transient = 250;
        out.push_back(sc);
    }

    impact_switch("switch-p5-to-p2-linear", "Fig. 3", ControlChannel::AdditiveForce,
                  kImpactP5, kImpactP2, 5.0, 3.0);
    impact_switch("switch-p2-to-p5-linear", "Fig. 4", ControlChannel::AdditiveForce,
                  kImpactP2, kImpactP5, 5.0, 3.0);
    impact_switch("switch-p5-to-p2-amp", "Fig. 5", ControlChannel::ForcingAmplitude,
                  kImpactP5, kImpactP2, 0.3, 5.0);
    impact_switch("switch-p2-to-p5-amp", "Fig. 6", ControlChannel::ForcingAmplitude,
                  kImpactP2, kImpactP5, 0.3, 5.0);
    impact_switch("switch-p5-to-p2-gap", "Fig. 7", ControlChannel::Gap, kImpactP5, kImpactP2,
                  0.3, 5.0);
    impact_switch("switch-p2-to-p5-gap", "Fig. 8", ControlChannel::Gap, kImpactP2, kImpactP5,
                  0.3, 5.0);

    {
        Scenario sc;
        sc.name = "basin-impact-three";
        sc.figure = "Fig. 9";
        sc.action = Action::Basin;
        sc.kind = SystemKind::SoftImpact;
        sc.impact = kImpactThree;
        sc.channel = ControlChannel::ForcingAmplitude;
        out.push_back(sc);
    }
    {
        Scenario sc;
        sc.name = "three-cycle-amp";
        sc.figure = "Fig. 10";
        sc.action = Action::Cycle;
        sc.kind = SystemKind::SoftImpact;
        sc.impact = kImpactThree;
        sc.channel = ControlChannel::ForcingAmplitude;
        sc.cycle.stops = {kThreeP7Large, kThreeP7Small, kThreeP3};
        sc.cycle.max_value = 0.2;
        sc.cycle.max_rate = 10.0;
        out.push_back(sc);
    }
    {
        Scenario sc;
        sc.name = "basin-duffing";
        sc.figure = "Fig. 11";
        sc.action = Action::Basin;
        sc.kind = SystemKind::Duffing;
        sc.duffing = kDuffingRef;
        sc.channel = ControlChannel::CubicStiffness;
        out.push_back(sc);
    }
    {
        Scenario sc;
        sc.name = "duffing-switch";
        sc.figure = "Fig. 12";
        sc.action = Action::Switch;
        sc.kind = SystemKind::Duffing;
        sc.duffing = kDuffingRef;
        sc.channel = ControlChannel::CubicStiffness;
        sc.sw.source_ic = kDuffingLarge;
        sc.sw.target_ic = kDuffingSmall;
        sc.sw.max_value = 0.3;
        sc.sw.max_rate = 10.0;
        out.push_back(sc);

        sc.name = "duffing-switch-reverse";
        sc.figure = "Fig. 13";
        sc.sw.source_ic = kDuffingSmall;
        sc.sw.target_ic = kDuffingLarge;
        out.push_back(sc);
    }
    {
        Scenario sc;
        sc.name = "sweep-impact-p2";
        sc.figure = "Fig. 6(a)";
        sc.action = Action::Sweep;
        sc.kind = SystemKind::SoftImpact;
        sc.impact = kImpactRef;
        sc.channel = ControlChannel::AdditiveForce;
        sc.sweep.param = SweepParam::ForcingAmp;
        sc.sweep.start_ic = kImpactP2;
        sc.sweep.to = 0.615;
        sc.sweep.also_to = 1.5462;
        sc.sweep.has_also_to = true;
        sc.sweep.dstep = 0.005;
        out.push_back(sc);

        sc.name = "sweep-impact-p5";
        sc.sweep.start_ic = kImpactP5;
        sc.sweep.to = 0.63;
        sc.sweep.also_to = 0.725;
        sc.sweep.dstep = 0.002;
        out.push_back(sc);
    }
    {
        Scenario sc;
        sc.name = "sweep-duffing-p1";
        sc.figure = "Fig. 12(a)";
        sc.action = Action::Sweep;
        sc.kind = SystemKind::Duffing;
        sc.duffing = kDuffingRef;
        sc.duffing.p1 = 0.8;
        sc.channel = ControlChannel::CubicStiffness;
        sc.sweep.param = SweepParam::Damping;
        sc.sweep.start_ic = kDuffingLargeP08;
        sc.sweep.arclength = true;
        sc.sweep.arc_lo = 0.55;
        sc.sweep.arc_hi = 1.05;
        sc.sweep.arc_direction = 1.0;
        out.push_back(sc);
    }
    {
        Scenario sc;
        sc.name = "region-impact-a-e";
        sc.figure = "Fig. 7(a)";
        sc.action = Action::Region;
        sc.kind = SystemKind::SoftImpact;
        sc.impact = kImpactRef;
        sc.channel = ControlChannel::AdditiveForce;
        sc.region.from = 1.26;
        sc.region.to = 2.9;
        sc.region.slices = 40;
        sc.region.seed_ic = kImpactP2;
        sc.region.seed_ic2 = kImpactP5;
        sc.region.sweep_lo = 0.3;
        sc.region.sweep_hi = 3.5;
        out.push_back(sc);
    }
    {
        Scenario sc;
        sc.name = "region-duffing-p1-p2";
        sc.figure = "Fig. 12(d)";
        sc.action = Action::Region;
        sc.kind = SystemKind::Duffing;
        sc.duffing = kDuffingRef;
        sc.duffing.p1 = 0.8;
        sc.channel = ControlChannel::CubicStiffness;
        sc.region.from = 1.0;
        sc.region.to = 1.62;
        sc.region.slices = 40;
        sc.region.seed_ic = kDuffingLargeP08;
        sc.region.sweep_lo = 0.4;
        sc.region.sweep_hi = 1.6;
        out.push_back(sc);
    }
    return out;
}

[[nodiscard]] inline const Scenario* find_builtin(const std::string& name) {
    static const std::vector<Scenario> all = builtin_scenarios();
    for (const auto& sc : all)
        if (sc.name == name) return &sc;
    return nullptr;
}

}  // namespace attrswitch
