// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "grkin/kinetic_solver.hpp"
#include "grkin/phase_grid.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace grkin {

enum class ExperimentKind { decay, eps_sweep, oracle_check, inequality_battery };

[[nodiscard]] ExperimentKind parse_experiment_kind(const std::string &name);
[[nodiscard]] std::string experiment_kind_name(ExperimentKind kind);

struct ExperimentConfig {
    // [model]
    double epsilon = 1.0;
    double sigma = 1.0;
    int dim = 1;
    double rho_m = 0.5;
    double rho_M = 2.0;
    double delta = 0.05;
    // [grid]
    int nx = 64;
    int nv = 64;
    double v_max = 8.0;
    double temperature1 = 1.0; ///< temperature of the Gaussian chi1
    double temperature2 = 1.0;
    std::string chi_file; ///< tabulated equilibrium (used for both species) instead of Gaussians
    // [solver]
    double dt = 1e-3;
    double t_final = 10.0;
    int cadence = 100;
    Splitting splitting = Splitting::strang;
    int threads = 0;
    // [initial]
    InitialCondition initial = default_initial();
    std::uint64_t seed = 1;
    // [experiment]
    ExperimentKind kind = ExperimentKind::decay;
    std::vector<double> sigmas{1.0, 0.0};
    std::vector<double> deltas{0.2, 0.1, 0.05, 0.01};
    std::vector<double> eps_list{0.4, 0.2, 0.1, 0.05, 0.025};
    double sweep_dt_scale = 0.02; ///< eps-sweep step: min(dt, sweep_dt_scale * eps^2)
    double rd_dt = 1e-4;
    double oracle_horizon = 0.1;
    int oracle_time_nodes = 100;
    double picard_tolerance = 1e-12;
    int picard_max_iterations = 60;
    int battery_states = 100;
    // [output]
    std::string output_dir = "grkin-out";
    int snapshot_every = 0; ///< write a state snapshot every n recorded states (0: final only)

    static InitialCondition default_initial();

    /// Checks every field against the preconditions of the modules it feeds.
    void validate() const;

    [[nodiscard]] Equilibrium make_chi(int species) const;
    [[nodiscard]] PhaseGrid make_grid() const;
    [[nodiscard]] ModelParams model() const { return {epsilon, sigma}; }
    [[nodiscard]] SolverConfig solver() const;

    /// Sets one key, "section.key" (e.g. "model.sigma"); throws ConfigError on an unknown key
    /// or malformed value.
    void set(const std::string &key, const std::string &value);
    [[nodiscard]] std::string get(const std::string &key) const;
    [[nodiscard]] static std::vector<std::string> keys();

    /// INI text with every key, in a fixed order.
    [[nodiscard]] std::string to_ini() const;
    [[nodiscard]] static ExperimentConfig from_ini(const std::string &text);
    [[nodiscard]] static ExperimentConfig load(const std::string &path);
};

} // namespace grkin
