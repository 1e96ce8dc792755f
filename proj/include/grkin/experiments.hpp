// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "grkin/config.hpp"
#include "grkin/diagnostics.hpp"

#include <string>
#include <vector>

namespace grkin {

/// Library version string.
[[nodiscard]] const char *library_version() noexcept;

/// Output directory of a run: $GRKIN_OUTPUT_DIR when set, else config.output_dir.
[[nodiscard]] std::string resolve_output_dir(const ExperimentConfig &config);

/// 64-bit FNV-1a over raw bytes.
[[nodiscard]] std::uint64_t fnv1a(const void *data, std::size_t bytes, std::uint64_t seed = 14695981039346656037ull);

struct DecaySeries {
    double sigma = 0.0;
    std::vector<DiagnosticsRecord> records;
    DecayFit fit;
    std::vector<DeltaSweepRow> sweep;
    bool monotone = false;         ///< Gamma nonincreasing at the configured delta
    double max_conservation_drift = 0.0;
    double min_bound_margin = 0.0; ///< smallest distance of f_i / chi_i to its sandwich bounds
    EntropyBalance balance;
    double gamma_dist_ratio_min = 0.0; ///< measured equivalence constants of Gamma and ||F - F_inf||^2
    double gamma_dist_ratio_max = 0.0;
};

struct DecayResult {
    std::vector<DecaySeries> series;
    bool at_equilibrium = false;
    bool passed = false;
    std::string summary; ///< JSON
    std::vector<std::string> files;
};

struct EpsSweepRow {
    double epsilon = 0.0;
    double dt = 0.0;
    long steps = 0;
    double err1 = 0.0, err2 = 0.0;     ///< ||rho_i - rho_i^0||_L2 at t_final
    double micro1 = 0.0, micro2 = 0.0; ///< ||f_i - rho_i chi_i||_i, norm int int g^2 / chi_i
    double flux1 = 0.0, flux2 = 0.0;   ///< relative L2 gap of int v (f_i - rho_i chi_i) / eps against -D_i grad rho_i^0
};

struct EpsSweepResult {
    std::vector<EpsSweepRow> rows;
    std::vector<double> err_order1, err_order2;     ///< observed orders between consecutive eps
    std::vector<double> micro_ratio1, micro_ratio2; ///< micro(eps_k) / micro(eps_{k+1})
    bool errors_decreasing = false;
    bool micro_first_order = false; ///< every ratio within [1.6, 2.4] (halving lists)
    bool passed = false;
    std::string summary;
    std::vector<std::string> files;
};

struct OracleResult {
    double sup = 0.0, l2 = 0.0;           ///< at dt
    double sup_half = 0.0, l2_half = 0.0; ///< at dt / 2
    double ratio = 0.0;                   ///< sup / sup_half
    int picard_iterations = 0;
    double picard_residual = 0.0;
    bool passed = false;
    std::string summary;
    std::vector<std::string> files;
};

struct BatteryCheckStats {
    std::string name;
    int failures = 0;
    double min_margin = 0.0;
    double min_relative_margin = 0.0; ///< margin / max(|rhs|, tiny)
};

struct BatteryResult {
    int states = 0;
    std::vector<BatteryCheckStats> checks;
    bool passed = false;
    std::string summary;
    std::vector<std::string> files;
};

[[nodiscard]] DecayResult run_decay(const ExperimentConfig &config);
[[nodiscard]] EpsSweepResult run_eps_sweep(const ExperimentConfig &config);
[[nodiscard]] OracleResult run_oracle_check(const ExperimentConfig &config);
[[nodiscard]] BatteryResult run_inequality_battery(const ExperimentConfig &config);

struct ExperimentOutcome {
    bool passed = false;
    std::string summary;
    std::vector<std::string> files;
};

/// Dispatches on config.kind.
[[nodiscard]] ExperimentOutcome run_experiment(const ExperimentConfig &config);

/// Builds the initial state of a config (random profiles seeded from config.seed).
[[nodiscard]] StatePair initial_state(const ExperimentConfig &config, const PhaseGrid &grid);

} // namespace grkin
