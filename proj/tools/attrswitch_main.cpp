// Command-line driver: run a named or file-based scenario, list the built-in
// experiments, or verify that a manifest reproduces byte-identical artifacts.

#include <cstdio>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "attrswitch/csv.hpp"
#include "attrswitch/runner.hpp"
#include "attrswitch/scenario.hpp"

namespace {

using namespace attrswitch;

int cmd_list() {
    std::printf("%-28s %-10s %s\n", "name", "action", "figure");
    for (const auto& sc : builtin_scenarios())
        std::printf("%-28s %-10s %s\n", sc.name.c_str(), to_string(sc.action).c_str(),
                    sc.figure.empty() ? "-" : sc.figure.c_str());
    return 0;
}

int cmd_run(const std::string& target, const std::string& out_override, int workers) {
    Scenario sc;
    try {
        if (const Scenario* built = find_builtin(target)) {
            sc = *built;
        } else if (std::filesystem::exists(target)) {
            const std::string text = read_file(target);
            const auto first = text.find_first_not_of(" \t\r\n");
            if (first != std::string::npos && text[first] == '{') {
                // a manifest: re-run its embedded scenario
                sc = scenario_from_json(nlohmann::json::parse(text).at("scenario"));
            } else {
                sc = parse_scenario(text);
            }
        } else {
            std::fprintf(stderr, "error: '%s' is neither a built-in scenario nor a file\n",
                         target.c_str());
            return 2;
        }
    } catch (const std::exception& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 2;
    }

    const std::filesystem::path out_dir =
        out_override.empty() ? sc.resolved_output_dir() : out_override;
    std::printf("running '%s' (%s) -> %s\n", sc.name.c_str(), to_string(sc.action).c_str(),
                out_dir.string().c_str());
    auto outcome = run_scenario(sc, out_dir, workers);
    for (const auto& f : outcome.files) std::printf("  wrote %s\n", f.c_str());
    if (outcome.status != 0)
        std::fprintf(stderr, "error: %s\n", outcome.message.c_str());
    else
        std::printf("done\n");
    return outcome.status;
}

int cmd_verify(const std::string& manifest, int workers) {
    try {
        auto res = verify_manifest(manifest, workers);
        std::printf("%s: %s\n", res.ok ? "OK" : "MISMATCH", res.message.c_str());
        return res.ok ? 0 : 3;
    } catch (const std::exception& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"attractor switching toolkit for periodically forced oscillators"};
    app.require_subcommand(1);
    const int workers = attrswitch::default_worker_count();

    std::string run_target, out_dir, manifest;

    auto* run = app.add_subcommand("run", "run a built-in scenario, config file or manifest");
    run->add_option("scenario", run_target, "built-in name, config file or manifest.json")
        ->required();
    run->add_option("-o,--output", out_dir, "output directory (default out/<name>)");

    auto* list = app.add_subcommand("list", "list built-in scenarios");

    auto* verify =
        app.add_subcommand("verify", "re-run a manifest and compare artifact bytes");
    verify->add_option("manifest", manifest, "path to manifest.json")->required();

    CLI11_PARSE(app, argc, argv);

    if (list->parsed()) return cmd_list();
    if (run->parsed()) return cmd_run(run_target, out_dir, workers);
    if (verify->parsed()) return cmd_verify(manifest, workers);
    return 0;
}
