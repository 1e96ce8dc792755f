// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace grkin {

/// Discrete velocity equilibrium chi on the truncated box [-v_max, v_max]^d.
///
/// Nodes form a tensor-product grid with an even number of uniformly spaced
/// points per dimension, symmetric about the origin (v_j = -v_{n-1-j} exactly),
/// and trapezoid weights. Values are renormalized so that sum_k w_k chi_k = 1.
/// Node k has components nodes[k * dim + a], a = 0..dim-1; the last velocity
/// component varies fastest.
struct Equilibrium {
    int dim = 1;
    int nodes_per_dim = 0;
    double v_max = 0.0;
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<double> values;
    double second_moment = 0.0;    ///< sum_k w_k |v_k|^2 chi_k
    double temperature_like = 0.0; ///< second_moment / dim

    [[nodiscard]] std::size_t size() const noexcept { return weights.size(); }
    [[nodiscard]] double node(std::size_t k, int a) const noexcept { return nodes[k * static_cast<std::size_t>(dim) + a]; }
};

/// Renormalized discrete centered Gaussian with variance `temperature` per component.
[[nodiscard]] Equilibrium make_gaussian(double temperature, int dim, double v_max, int nodes_per_dim);

/// Equilibrium from values tabulated on the standard node layout. With `renormalize`
/// the values are scaled to unit discrete mass; no validation is performed, so
/// the result may be inspected with validate_equilibrium.
[[nodiscard]] Equilibrium make_tabulated(int dim, double v_max, int nodes_per_dim, std::vector<double> values,
                                         bool renormalize = true);

/// Uniform symmetric 1D node coordinates used for every velocity dimension.
[[nodiscard]] std::vector<double> velocity_nodes_1d(double v_max, int nodes_per_dim);

struct EquilibriumCheck {
    std::string name;
    bool passed = false;
    double residual = 0.0;
};

struct EquilibriumReport {
    std::vector<EquilibriumCheck> checks;

    [[nodiscard]] bool all_passed() const noexcept;
    [[nodiscard]] const EquilibriumCheck &at(std::string_view name) const;
};

/// Checks positivity, normalization, zero mean per component, and a finite positive
/// second moment. Residuals: minimum value, |mass - 1|, max |mean_a|, second moment.
[[nodiscard]] EquilibriumReport validate_equilibrium(const Equilibrium &chi);

/// theta / sigma with theta = (1/d) sum_k w_k |v_k|^2 chi_k. At d = 3 this is the
/// familiar (1/(3 sigma)) int |v|^2 chi.
[[nodiscard]] double diffusion_coefficient(const Equilibrium &chi, double sigma);

/// Plain-text snapshot: header lines followed by one "v_1 .. v_d weight value" row per node.
[[nodiscard]] std::string equilibrium_to_text(const Equilibrium &chi);
[[nodiscard]] Equilibrium equilibrium_from_text(std::string_view text);

} // namespace grkin
