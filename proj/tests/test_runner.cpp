#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "attrswitch/csv.hpp"
#include "attrswitch/runner.hpp"
#include "attrswitch/scenario.hpp"

using namespace attrswitch;
using Catch::Approx;

namespace {

const char* kSwitchConfig = R"(# reference switch, linear channel
[scenario]
name = demo-switch
action = switch
figure = Fig. 3

[system]
kind = soft-impact
channel = additive-force
zeta = 0.01
e = 1.26
a = 0.7
beta = 28
omega = 0.85

[switch]
source = -0.882946966163, 0.648017446776
target = -0.618641287115, 1.022020054969
max_value = 5
max_rate = 3
)";

std::filesystem::path fresh_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() / ("attrswitch-test-" + tag);
    std::filesystem::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("config parser round trip", "[runner]") {
    auto sc = parse_scenario(kSwitchConfig);
    CHECK(sc.name == "demo-switch");
    CHECK(sc.action == Action::Switch);
    CHECK(sc.kind == SystemKind::SoftImpact);
    CHECK(sc.impact.a == 0.7);
    CHECK(sc.sw.max_value == 5.0);
    CHECK(sc.sw.epsilon == 1e-3);          // default recorded
    CHECK(sc.sw.engage_periods == 80.0);   // default recorded
    CHECK(sc.step.h == 0.002);

    auto j = scenario_to_json(sc);
    auto back = scenario_from_json(j);
    CHECK(back.name == sc.name);
    CHECK(back.sw.source_ic.x == sc.sw.source_ic.x);
    CHECK(back.sw.max_rate == sc.sw.max_rate);
    CHECK(back.impact.omega == sc.impact.omega);
}

TEST_CASE("config errors carry a location or name the missing key", "[runner]") {
    SECTION("syntax error with line and column") {
        try {
            (void)Config::parse("[scenario]\nname demo\n");
            FAIL("expected ParseError");
        } catch (const ParseError& err) {
            CHECK(err.line == 2);
            CHECK(std::string(err.what()).find("line 2") != std::string::npos);
        }
    }
    SECTION("missing key is named") {
        std::string text = kSwitchConfig;
        const auto pos = text.find("omega = 0.85\n");
        REQUIRE(pos != std::string::npos);
        text.erase(pos, std::string("omega = 0.85\n").size());
        try {
            (void)parse_scenario(text);
            FAIL("expected ConfigError");
        } catch (const ConfigError& err) {
            CHECK(std::string(err.what()).find("omega") != std::string::npos);
        }
    }
    SECTION("unknown keys are rejected") {
        std::string text = kSwitchConfig;
        text += "\n[switch]\n";  // reopening a section is fine...
        try {
            (void)parse_scenario(std::string(kSwitchConfig) + "bogus_key = 1\n");
            FAIL("expected ConfigError");
        } catch (const ConfigError& err) {
            CHECK(std::string(err.what()).find("bogus_key") != std::string::npos);
        }
    }
    SECTION("duplicate keys are rejected") {
        CHECK_THROWS_AS(Config::parse("[a]\nx = 1\nx = 2\n"), ParseError);
    }
    SECTION("values must be clean numbers") {
        std::string text = kSwitchConfig;
        const auto pos = text.find("max_rate = 3");
        text.replace(pos, std::string("max_rate = 3").size(), "max_rate = 3q");
        CHECK_THROWS_AS(parse_scenario(text), ConfigError);
    }
}

TEST_CASE("built-in catalogue covers the reproduced figures", "[runner]") {
    auto all = builtin_scenarios();
    CHECK(all.size() >= 12);

    const Scenario* cycle = find_builtin("three-cycle-amp");
    REQUIRE(cycle != nullptr);
    CHECK(cycle->cycle.max_value == Approx(0.2));
    CHECK(cycle->cycle.max_rate == Approx(10.0));
    CHECK(cycle->figure == "Fig. 10");

    const Scenario* duf = find_builtin("duffing-switch");
    REQUIRE(duf != nullptr);
    CHECK(duf->sw.max_value == Approx(0.3));
    CHECK(duf->sw.max_rate == Approx(10.0));

    CHECK(find_builtin("basin-impact-default") != nullptr);
    CHECK(find_builtin("switch-p5-to-p2-linear") != nullptr);
    CHECK(find_builtin("region-duffing-p1-p2") != nullptr);
    CHECK(find_builtin("no-such-scenario") == nullptr);

    for (const auto& sc : all) {
        INFO(sc.name);
        CHECK_NOTHROW(scenario_from_json(scenario_to_json(sc)));
    }
}

TEST_CASE("seventeen significant digits round-trip", "[runner]") {
    for (double v : {0.1, 1.0 / 3.0, 6.283185307179586, 1e-17, -2.5e300}) {
        CHECK(std::stod(fmt17(v)) == v);
    }
}

TEST_CASE("simulate scenario writes deterministic artifacts", "[runner]") {
    Scenario sc = *find_builtin("simulate-impact-transient");
    sc.sim.periods = 5.0;

    auto dir1 = fresh_dir("sim1");
    auto dir2 = fresh_dir("sim2");
    auto r1 = run_scenario(sc, dir1, 2);
    auto r2 = run_scenario(sc, dir2, 2);
    REQUIRE(r1.status == 0);
    REQUIRE(r2.status == 0);
    CHECK(read_file(dir1 / "trajectory.csv") == read_file(dir2 / "trajectory.csv"));

    auto res = verify_manifest(dir1 / "manifest.json", 2);
    CHECK(res.ok);
    std::filesystem::remove_all(dir1);
    std::filesystem::remove_all(dir2);
}

TEST_CASE("basin scenario on a coarse grid finds both basins", "[runner][slow]") {
    Scenario sc = *find_builtin("basin-impact-quick");
    sc.basin.grid.nx = 12;
    sc.basin.grid.nv = 12;
    sc.basin.seeds = 36;

    auto dir = fresh_dir("basin");
    auto res = run_scenario(sc, dir, 2);
    REQUIRE(res.status == 0);
    auto summary = nlohmann::json::parse(read_file(dir / "summary.json"));
    CHECK(summary.at("registry").size() == 2);
    const auto counts = summary.at("counts").get<std::vector<long>>();
    CHECK(counts.size() == 2);
    CHECK(counts[0] > 0);
    CHECK(counts[1] > 0);

    // per-cell labels match the summary histogram
    const std::string csv = read_file(dir / "basin.csv");
    CHECK(csv.rfind("x,v,label\n", 0) == 0);
    std::filesystem::remove_all(dir);
}

TEST_CASE("failed switches surface as status 3 without throwing", "[runner][slow]") {
    Scenario sc = *find_builtin("duffing-switch");
    sc.sw.max_periods = 0.5;  // hopeless budget
    auto dir = fresh_dir("failswitch");
    auto res = run_scenario(sc, dir, 2);
    CHECK(res.status == 3);
    CHECK(!res.message.empty());
    std::filesystem::remove_all(dir);
}

TEST_CASE("invalid parameters surface as status 2", "[runner]") {
    Scenario sc = *find_builtin("simulate-impact-transient");
    sc.impact.e = -1.0;
    auto dir = fresh_dir("badcfg");
    auto res = run_scenario(sc, dir, 2);
    CHECK(res.status == 2);
    std::filesystem::remove_all(dir);
}

TEST_CASE("sample scenario files under scenarios/ parse cleanly", "[runner]") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::path(PROJECT_SOURCE_DIR) / "scenarios";
    REQUIRE(fs::exists(dir));
    int seen = 0;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() != ".cfg") continue;
        ++seen;
        INFO(entry.path().string());
        CHECK_NOTHROW(parse_scenario(read_file(entry.path())));
    }
    CHECK(seen >= 2);
}
