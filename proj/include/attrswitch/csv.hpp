#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "attrswitch/basin.hpp"
#include "attrswitch/continuation.hpp"
#include "attrswitch/control.hpp"
#include "attrswitch/errors.hpp"
#include "attrswitch/integrate.hpp"

namespace attrswitch {

/// Fixed 17-significant-digit decimal formatting: round-trips any double and
/// keeps file bytes identical across runs.
[[nodiscard]] inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Write-temp-then-rename so readers never observe partial files.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
    }
    std::filesystem::rename(tmp, path);
}

[[nodiscard]] inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path.string());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

/// FNV-1a 64-bit content fingerprint, hex encoded.
[[nodiscard]] inline std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

[[nodiscard]] inline std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "tau,x,v,u\n";
    for (std::size_t i = 0; i < traj.size(); ++i) {
        out += fmt17(traj.times[i]);
        out += ',';
        out += fmt17(traj.states[i].x);
        out += ',';
        out += fmt17(traj.states[i].v);
        out += ',';
        out += fmt17(traj.controls[i]);
        out += '\n';
    }
    return out;
}

[[nodiscard]] inline std::string switch_trace_csv(const SwitchResult& res) {
    std::string out = "tau,x,v,u,delta2norm\n";
    for (std::size_t i = 0; i < res.trace.size(); ++i) {
        out += fmt17(res.trace.times[i]);
        out += ',';
        out += fmt17(res.trace.states[i].x);
        out += ',';
        out += fmt17(res.trace.states[i].v);
        out += ',';
        out += fmt17(res.trace.controls[i]);
        out += ',';
        out += fmt17(res.delta_trace[i]);
        out += '\n';
    }
    return out;
}

[[nodiscard]] inline std::string basin_csv(const BasinGrid& grid) {
    std::string out = "x,v,label\n";
    for (int j = 0; j < grid.spec.nv; ++j) {
        for (int i = 0; i < grid.spec.nx; ++i) {
            out += fmt17(grid.spec.x_at(i));
            out += ',';
            out += fmt17(grid.spec.v_at(j));
            out += ',';
            out += std::to_string(grid.label(i, j));
            out += '\n';
        }
    }
    return out;
}

/// Branch export; the solution measure is the contact time for the impact
/// system and the peak-to-peak amplitude for the Duffing system.
[[nodiscard]] inline std::string branch_csv(const Branch& branch, SystemKind kind) {
    std::string out = "param,measure,lambda1_re,lambda1_im,lambda2_re,lambda2_im,stable\n";
    for (const auto& o : branch.points) {
        const double measure =
            kind == SystemKind::SoftImpact ? o.contact_time : o.peak_to_peak;
        out += fmt17(o.param);
        out += ',';
        out += fmt17(measure);
        out += ',';
        out += fmt17(o.multiplier1.real());
        out += ',';
        out += fmt17(o.multiplier1.imag());
        out += ',';
        out += fmt17(o.multiplier2.real());
        out += ',';
        out += fmt17(o.multiplier2.imag());
        out += ',';
        out += o.stable ? '1' : '0';
        out += '\n';
    }
    return out;
}

}  // namespace attrswitch
