// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "grkin/equilibria.hpp"
#include "grkin/spectral.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace grkin {

/// Discretized phase space T^d x [-v_max, v_max]^d. The torus [0,1)^d carries nx
/// uniform points per dimension (midpoint rule, |Omega| = 1); both species share
/// one velocity node set. Phase-space arrays are velocity-major: index
/// iv * space_size() + ix, so each velocity slice is a contiguous spatial field.
class PhaseGrid {
public:
    PhaseGrid(int dim, int nx, Equilibrium chi1, Equilibrium chi2);

    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] int nx() const noexcept { return nx_; }
    [[nodiscard]] std::size_t space_size() const noexcept { return nspace_; }
    [[nodiscard]] std::size_t velocity_size() const noexcept { return nvel_; }
    [[nodiscard]] std::size_t size() const noexcept { return nspace_ * nvel_; }
    [[nodiscard]] double cell_volume() const noexcept { return cell_volume_; }

    [[nodiscard]] const Equilibrium &chi(int species) const noexcept { return species == 0 ? chi1_ : chi2_; }
    [[nodiscard]] const Equilibrium &chi1() const noexcept { return chi1_; }
    [[nodiscard]] const Equilibrium &chi2() const noexcept { return chi2_; }
    [[nodiscard]] const std::vector<double> &weights() const noexcept { return chi1_.weights; }
    [[nodiscard]] double velocity(std::size_t iv, int a) const noexcept { return chi1_.node(iv, a); }

    /// Coordinate of spatial point ix along axis a.
    [[nodiscard]] double x_coord(std::size_t ix, int a) const noexcept;

    /// Spectral transforms of one spatial field.
    [[nodiscard]] const TorusSpectral &spectral() const noexcept { return *spectral_; }
    [[nodiscard]] std::shared_ptr<const TorusSpectral> spectral_ptr() const noexcept { return spectral_; }

private:
    int dim_;
    int nx_;
    std::size_t nspace_;
    std::size_t nvel_;
    double cell_volume_;
    Equilibrium chi1_;
    Equilibrium chi2_;
    std::shared_ptr<const TorusSpectral> spectral_;
};

/// F = (f1, f2) at one time.
struct StatePair {
    std::vector<double> f1;
    std::vector<double> f2;
    double time = 0.0;

    [[nodiscard]] std::vector<double> &f(int species) noexcept { return species == 0 ? f1 : f2; }
    [[nodiscard]] const std::vector<double> &f(int species) const noexcept { return species == 0 ? f1 : f2; }
};

[[nodiscard]] StatePair zero_state(const PhaseGrid &grid);

/// Componentwise a * F + b * G.
[[nodiscard]] StatePair combine(double a, const StatePair &F, double b, const StatePair &G);

struct MacroFields {
    std::vector<double> rho1;
    std::vector<double> rho2;

    [[nodiscard]] const std::vector<double> &rho(int species) const noexcept { return species == 0 ? rho1 : rho2; }
    [[nodiscard]] std::vector<double> &rho(int species) noexcept { return species == 0 ? rho1 : rho2; }
};

/// Global equilibrium F_inf = (rho1_inf chi1, rho2_inf chi2) with rho1_inf rho2_inf = 1.
struct EquilibriumState {
    double rho1_inf = 1.0;
    double rho2_inf = 1.0;

    [[nodiscard]] double rho_inf(int species) const noexcept { return species == 0 ? rho1_inf : rho2_inf; }
    [[nodiscard]] StatePair state(const PhaseGrid &grid) const;
};

[[nodiscard]] MacroFields moments(const StatePair &F, const PhaseGrid &grid);

/// <F, G> = sum_i int int f_i g_i / (rho_i_inf chi_i).
[[nodiscard]] double weighted_inner(const StatePair &F, const StatePair &G, const EquilibriumState &eq,
                                    const PhaseGrid &grid);
[[nodiscard]] double weighted_norm_sq(const StatePair &F, const EquilibriumState &eq, const PhaseGrid &grid);

/// Pi F = (rho1 chi1, rho2 chi2).
[[nodiscard]] StatePair projection_Pi(const StatePair &F, const PhaseGrid &grid);
/// Pi_Omega F = (<rho1> chi1, <rho2> chi2) with <.> the spatial mean.
[[nodiscard]] StatePair projection_PiOmega(const StatePair &F, const PhaseGrid &grid);

/// Discrete int int (f1 - f2).
[[nodiscard]] double conserved_mass_difference(const StatePair &F, const PhaseGrid &grid);

/// Positive root of rho - 1/rho = m and its reciprocal.
[[nodiscard]] EquilibriumState equilibrium_from_mass_difference(double m);
[[nodiscard]] EquilibriumState equilibrium_state(const StatePair &F0, const PhaseGrid &grid);

/// Spatial profile r(x) used to seed f_i0 = r_i(x) chi_i(v).
struct Profile {
    enum class Kind { constant, cosine, step, random };
    Kind kind = Kind::constant;
    double mean = 1.0;
    double amplitude = 0.0;
    std::array<int, 3> mode{1, 0, 0}; ///< wave vector for cosine; first axis for step
    double phase = 0.0;
    double width = 0.05;              ///< transition width of the smoothed step
    int random_modes = 4;
    std::uint64_t seed = 0;

    [[nodiscard]] std::vector<double> sample(const PhaseGrid &grid) const;
};

[[nodiscard]] Profile::Kind parse_profile_kind(const std::string &name);
[[nodiscard]] std::string profile_kind_name(Profile::Kind kind);

struct InitialCondition {
    Profile species1;
    Profile species2;
    /// Adds r_i chi_i * micro_amplitude * tanh(v_0) * sin(2 pi x_0); requires `unchecked`.
    double micro_amplitude = 0.0;
    bool unchecked = false;
};

/// f_i0 = r_i(x) chi_i(v). Rejects profiles leaving [rho_m, rho_M] (species 1) or
/// [1/rho_M, 1/rho_m] (species 2) unless the condition is marked unchecked.
[[nodiscard]] StatePair make_initial_condition(const InitialCondition &ic, const PhaseGrid &grid, double rho_m,
                                               double rho_M);

/// Random state with f1/chi1 in [rho_m, rho_M] and f2/chi2 in [1/rho_M, 1/rho_m] at every
/// node, smooth in x with node-level noise; deterministic in `seed`.
[[nodiscard]] StatePair make_random_bounded_state(const PhaseGrid &grid, double rho_m, double rho_M,
                                                  std::uint64_t seed);

} // namespace grkin
