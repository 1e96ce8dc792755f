// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "grkin/phase_grid.hpp"
#include "grkin/rd_solver.hpp"

#include <cstdint>
#include <string>

namespace grkin {

/// Shared header of binary snapshots.
struct SnapshotHeader {
    std::uint32_t version = 1;
    std::uint32_t dim = 1;
    std::uint32_t nx = 0;
    std::uint32_t nv_per_dim = 0; ///< 0 for macroscopic (RD) snapshots
    double v_max = 0.0;
    double t = 0.0;
    double sigma = 0.0;
    double epsilon = 0.0;
};

/// Writes `path` (binary, little-endian) and `path + ".txt"` (plain-text header).
/// Layout: "GRKSTATE", u32 version, dim, nx, nv_per_dim, f64 v_max, t, sigma, epsilon,
/// f64 f1[size], f64 f2[size] in velocity-major order.
void write_state_snapshot(const std::string &path, const StatePair &F, const PhaseGrid &grid, double sigma,
                          double epsilon);

struct StateSnapshot {
    SnapshotHeader header;
    StatePair state;
};

[[nodiscard]] StateSnapshot read_state_snapshot(const std::string &path);

/// Same header with magic "GRKMACRO" and nv_per_dim = 0, followed by rho1[nx^d], rho2[nx^d].
void write_rd_snapshot(const std::string &path, const RDState &state, int dim, int nx, double sigma, double epsilon);

struct RDSnapshot {
    SnapshotHeader header;
    RDState state;
};

[[nodiscard]] RDSnapshot read_rd_snapshot(const std::string &path);

} // namespace grkin
