// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "grkin/phase_grid.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace grkin {

/// Scaled model parameters: epsilon > 0 (parabolic scaling), sigma >= 0 (thermalization rate).
struct ModelParams {
    double epsilon = 1.0;
    double sigma = 1.0;

    void validate() const;
    /// Relaxation rate sigma / epsilon^2 of the rescaled equation d_t f = ... .
    [[nodiscard]] double relaxation_rate() const noexcept { return sigma / (epsilon * epsilon); }
};

enum class Splitting { lie, strang };

[[nodiscard]] Splitting parse_splitting(const std::string &name);
[[nodiscard]] std::string splitting_name(Splitting s);

/// Sandwich bounds rho_m chi1 <= f1 <= rho_M chi1, chi2 / rho_M <= f2 <= chi2 / rho_m.
struct Bounds {
    double rho_m = 0.5;
    double rho_M = 2.0;
};

struct SolverConfig {
    double dt = 1e-3;
    double t_final = 1.0;
    Splitting splitting = Splitting::strang;
    int cadence = 1;                        ///< observe every `cadence` steps (and at t = 0, t_final)
    double bound_tolerance = 1e-8;          ///< relative
    double conservation_tolerance = 1e-10;  ///< relative to 1 + |m(0)|
    std::optional<Bounds> bounds;           ///< checked every step when present

    void validate() const;
};

struct BoundsReport {
    double r1_min = 0.0, r1_max = 0.0; ///< extrema of f1 / chi1
    double r2_min = 0.0, r2_max = 0.0; ///< extrema of f2 / chi2
    bool passed = true;
    int species = -1;                  ///< offending species (0/1) when failed
    std::size_t ix = 0, iv = 0;        ///< offending node when failed
    std::string message;
};

/// Extrema of f_i / chi_i and pass/fail against [rho_m, rho_M] and [1/rho_M, 1/rho_m]
/// with relative tolerance `tol`.
[[nodiscard]] BoundsReport check_bounds(const StatePair &F, double rho_m, double rho_M, const PhaseGrid &grid,
                                        double tol = 1e-8);

/// Exact flow of the pointwise moment system rho1' = rho2' = 1 - rho1 rho2 over time tau,
/// with the time integrals of rho1 and rho2 over the step.
struct MomentFlow {
    double rho1 = 0.0;
    double rho2 = 0.0;
    double int_rho1 = 0.0;
    double int_rho2 = 0.0;
};
[[nodiscard]] MomentFlow integrate_moment_system(double rho1, double rho2, double tau);

/// Strang-split integrator: exact spectral free transport at speed v / epsilon and an exact
/// pointwise reaction-relaxation flow. One instance owns its scratch buffers and must not be
/// shared between threads.
class KineticSolver {
public:
    KineticSolver(const PhaseGrid &grid, ModelParams params);

    [[nodiscard]] const PhaseGrid &grid() const noexcept { return *grid_; }
    [[nodiscard]] const ModelParams &params() const noexcept { return params_; }

    /// f(x, v) <- f(x - v tau / epsilon, v) for every velocity node.
    void transport(StatePair &F, double tau);
    /// Advances d_t f_i = (sigma/eps^2)(rho_i chi_i - f_i) + chi_i - rho_j f_i exactly.
    void reaction_relaxation(StatePair &F, double tau);
    void step(StatePair &F, double dt, Splitting splitting = Splitting::strang);

private:
    const std::vector<cplx> &phase_table(double tau);

    const PhaseGrid *grid_;
    ModelParams params_;
    std::vector<cplx> spectra_;
    struct PhaseCache {
        double tau = -1.0;
        std::vector<cplx> table;
    };
    std::vector<PhaseCache> cache_;
    std::size_t cache_next_ = 0;
};

[[nodiscard]] StatePair step_transport(const StatePair &F, double dt, const ModelParams &params,
                                       const PhaseGrid &grid);
[[nodiscard]] StatePair step_reaction_relaxation(const StatePair &F, double dt, const ModelParams &params,
                                                 const PhaseGrid &grid);
[[nodiscard]] StatePair step(const StatePair &F, double dt, const ModelParams &params, const PhaseGrid &grid);

struct RunSummary {
    StatePair final_state;
    long steps = 0;
    double max_conservation_drift = 0.0;
    double initial_mass_difference = 0.0;
    std::optional<BoundsReport> worst_bounds; ///< widest extrema seen over the run
};

using StateObserver = std::function<void(const StatePair &)>;

/// Advances F0 to config.t_final, calling `observer` at t = 0, every `cadence` steps and at
/// the final time. Throws NumericalFailure on NaN and InvariantViolation on bound or
/// conservation breaches.
RunSummary run(const StatePair &F0, const ModelParams &params, const SolverConfig &config, const PhaseGrid &grid,
               const StateObserver &observer = {});

} // namespace grkin
