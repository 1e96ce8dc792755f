// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "grkin/kinetic_solver.hpp"
#include "grkin/phase_grid.hpp"

#include <span>
#include <vector>

namespace grkin {

struct PicardConfig {
    int max_iterations = 50;
    double tolerance = 1e-10; ///< sup-norm change of the density history between iterates
    int time_nodes = 100;     ///< uniform intervals on [0, t] for the Duhamel integrals

    void validate() const;
};

/// Composite Simpson rule on uniformly spaced samples; an odd interval count closes
/// with the 3/8 rule, a single interval falls back to the trapezoid.
[[nodiscard]] double simpson(std::span<const double> samples, double h);

/// Damping factor exp(sigma (tau - t) / eps^2 - int_tau^t rho_j ds) from uniform samples of
/// rho_j along the characteristic on [tau, t].
[[nodiscard]] double q_factor(std::span<const double> rho_samples, double sigma, double epsilon, double tau,
                              double t);

struct PicardResult {
    StatePair state;
    int iterations = 0;
    double residual = 0.0;
    std::vector<double> residual_history;
};

/// Solves the mild (Duhamel) formulation of the kinetic system on [0, t] by Picard iteration
/// on the density history. Characteristic foot points x - v (t - s) / eps are evaluated by
/// trigonometric interpolation on the torus. Throws NumericalFailure when the iteration does
/// not reach the tolerance within max_iterations.
[[nodiscard]] PicardResult picard_solve(const StatePair &F0, double t, const ModelParams &params,
                                        const PhaseGrid &grid, const PicardConfig &config = {});

} // namespace grkin
