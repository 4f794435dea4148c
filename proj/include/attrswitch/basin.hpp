#pragma once

#include <cstdint>
#include <vector>

#include "attrswitch/fingerprint.hpp"
#include "attrswitch/parallel.hpp"

namespace attrswitch {

/// Rectangular grid of initial conditions, endpoints included.
struct BasinSpec {
    double x_min = -2.0, x_max = 2.0;
    double v_min = -2.0, v_max = 2.0;
    int nx = 500, nv = 500;

    [[nodiscard]] double x_at(int i) const {
        return nx > 1 ? x_min + (x_max - x_min) * i / (nx - 1) : x_min;
    }
    [[nodiscard]] double v_at(int j) const {
        return nv > 1 ? v_min + (v_max - v_min) * j / (nv - 1) : v_min;
    }
    [[nodiscard]] std::int64_t cells() const {
        return static_cast<std::int64_t>(nx) * nv;
    }
};

/// Per-cell attractor labels (index into the registry, kUnclassified for
/// cells that did not settle onto a registered attractor).
struct BasinGrid {
    BasinSpec spec;
    std::vector<int> labels;  // index = j * nx + i (v-major rows)

    [[nodiscard]] int label(int i, int j) const {
        return labels[static_cast<std::size_t>(j) * static_cast<std::size_t>(spec.nx) +
                      static_cast<std::size_t>(i)];
    }
};

inline constexpr double kClassifyTol = 1e-4;

/// Settle-and-classify every grid cell. Cells are independent, so the work
/// distributes over a worker pool with a deterministic result.
[[nodiscard]] inline BasinGrid basin_grid(const SystemDef& sys, const BasinSpec& grid,
                                          const std::vector<Fingerprint>& registry,
                                          const SettleOptions& opt = {},
                                          const StepSpec& spec = {},
                                          int workers = default_worker_count(),
                                          double classify_tol = kClassifyTol) {
    BasinGrid out;
    out.spec = grid;
    out.labels.assign(static_cast<std::size_t>(grid.cells()), kUnclassified);
    parallel_for(grid.cells(), workers, [&](std::int64_t cell) {
        const int i = static_cast<int>(cell % grid.nx);
        const int j = static_cast<int>(cell / grid.nx);
        const Fingerprint fp = settle(sys, {grid.x_at(i), grid.v_at(j)}, opt, spec);
        out.labels[static_cast<std::size_t>(cell)] = classify(fp, registry, classify_tol);
    });
    return out;
}

/// Settle from a deterministic lattice of seeds spread over the grid area and
/// collect the distinct periodic attractors found.
[[nodiscard]] inline std::vector<Fingerprint> discover_attractors(
    const SystemDef& sys, const BasinSpec& area, int n_seeds,
    const SettleOptions& opt = {}, const StepSpec& spec = {},
    int workers = default_worker_count(), double classify_tol = kClassifyTol) {
    int side = 1;
    while (side * side < n_seeds) ++side;
    BasinSpec lattice = area;
    lattice.nx = side;
    lattice.nv = side;

    std::vector<Fingerprint> settled(static_cast<std::size_t>(n_seeds));
    parallel_for(n_seeds, workers, [&](std::int64_t k) {
        const int i = static_cast<int>(k % side);
        const int j = static_cast<int>(k / side);
        settled[static_cast<std::size_t>(k)] =
            settle(sys, {lattice.x_at(i), lattice.v_at(j)}, opt, spec);
    });

    std::vector<Fingerprint> registry;
    for (auto& fp : settled) {
        if (!fp.periodic()) continue;
        if (classify(fp, registry, classify_tol) == kUnclassified)
            registry.push_back(std::move(fp));
    }
    return registry;
}

}  // namespace attrswitch
