// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "grkin/spectral.hpp"

#include <functional>
#include <string>
#include <vector>

namespace grkin {

/// Densities of the limiting reaction-diffusion system on the spatial grid.
struct RDState {
    std::vector<double> rho1;
    std::vector<double> rho2;
    double t = 0.0;
};

struct RDParams {
    double D1 = 1.0;
    double D2 = 1.0;
    bool reaction = true; ///< false: pure heat flow (test mode)

    void validate() const;
};

/// One Strang step of d_t rho_i = D_i Lap rho_i + 1 - rho1 rho2: exact spectral heat
/// half-steps around the exact pointwise flow of the reaction.
/// Throws NumericalFailure on NaN or negative density.
[[nodiscard]] RDState rd_step(const RDState &state, double dt, const RDParams &params, const TorusSpectral &grid);

struct RDRecord {
    double t = 0.0;
    double dist1 = 0.0; ///< ||rho1 - rho1_inf||_L2
    double dist2 = 0.0;
    double massdiff = 0.0; ///< spatial mean of rho1 - rho2
    double rho1_min = 0.0, rho1_max = 0.0, rho2_min = 0.0, rho2_max = 0.0;
};

[[nodiscard]] RDRecord rd_record(const RDState &state, double rho1_inf, double rho2_inf);

using RDObserver = std::function<void(const RDState &, const RDRecord &)>;

struct RDRunSummary {
    RDState final_state;
    std::size_t steps = 0;
    double max_mean_drift = 0.0;
};

/// Advances to t_final (last step shortened to land exactly), observing every `cadence`
/// steps and at the end. The equilibrium used in records follows from the mean of rho1 - rho2.
[[nodiscard]] RDRunSummary rd_run(const RDState &state0, double t_final, double dt, const RDParams &params,
                                  const TorusSpectral &grid, const RDObserver &observer = {}, int cadence = 1);

/// Spatial L2 norm of a - b on the unit torus.
[[nodiscard]] double l2_distance(const std::vector<double> &a, const std::vector<double> &b);

/// CSV header for RD records: "t,dist1,dist2,massdiff,rho1min,rho1max,rho2min,rho2max".
[[nodiscard]] const char *rd_csv_header();
[[nodiscard]] std::string rd_csv_row(const RDRecord &record);

} // namespace grkin
