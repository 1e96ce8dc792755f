// SPDX-License-Identifier: Apache-2.0
// Shared fixtures and independent reference computations for the test suites.

#pragma once

#include "grkin/diagnostics.hpp"
#include "grkin/kinetic_solver.hpp"
#include "grkin/phase_grid.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace grkin::test {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline PhaseGrid gaussian_grid(int dim, int nx, int nv, double v_max = 8.0, double temperature = 1.0)
{
    auto chi = make_gaussian(temperature, dim, v_max, nv);
    return PhaseGrid(dim, nx, chi, chi);
}

/// Standard perturbed profile used across suites.
inline InitialCondition cosine_ic()
{
    InitialCondition ic;
    ic.species1 = Profile{Profile::Kind::cosine, 1.0, 0.4};
    ic.species2 = Profile{Profile::Kind::cosine, 0.8, 0.25, {2, 0, 0}};
    return ic;
}

inline StatePair cosine_state(const PhaseGrid &g) { return make_initial_condition(cosine_ic(), g, 0.5, 2.0); }

inline double sup_diff(const std::vector<double> &a, const std::vector<double> &b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double sup_diff(const StatePair &a, const StatePair &b)
{
    return std::max(sup_diff(a.f1, b.f1), sup_diff(a.f2, b.f2));
}

/// Arbitrary (not necessarily positive) state with independent uniform entries.
inline StatePair random_signed_state(const PhaseGrid &g, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    StatePair F = zero_state(g);
    for (int s = 0; s < 2; ++s)
        for (std::size_t iv = 0; iv < g.velocity_size(); ++iv)
            for (std::size_t ix = 0; ix < g.space_size(); ++ix)
                F.f(s)[iv * g.space_size() + ix] = u(rng) * g.chi(s).values[iv];
    return F;
}

/// D3 by the defining triple integral with an explicit double velocity loop.
inline double naive_D3(const StatePair &F, const PhaseGrid &g)
{
    const std::size_t ns = g.space_size();
    const auto &w = g.weights();
    const auto &c1 = g.chi1().values;
    const auto &c2 = g.chi2().values;
    double total = 0.0;
    for (std::size_t ix = 0; ix < ns; ++ix)
        for (std::size_t a = 0; a < g.velocity_size(); ++a)
            for (std::size_t b = 0; b < g.velocity_size(); ++b) {
                const double p = F.f1[a * ns + ix] * F.f2[b * ns + ix];
                const double q = c1[a] * c2[b];
                total += w[a] * w[b] * (p - q) * std::log(p / q);
            }
    return total * g.cell_volume();
}

/// Classical RK4 for y' = rhs(t, y) with n uniform steps.
inline std::vector<double> rk4(const std::function<std::vector<double>(double, const std::vector<double> &)> &rhs,
                               std::vector<double> y, double t0, double t1, int n)
{
    const double h = (t1 - t0) / n;
    auto axpy = [](const std::vector<double> &y, double a, const std::vector<double> &k) {
        std::vector<double> r(y.size());
        for (std::size_t i = 0; i < y.size(); ++i)
            r[i] = y[i] + a * k[i];
        return r;
    };
    double t = t0;
    for (int i = 0; i < n; ++i) {
        const auto k1 = rhs(t, y);
        const auto k2 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k1));
        const auto k3 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k2));
        const auto k4 = rhs(t + h, axpy(y, h, k3));
        for (std::size_t j = 0; j < y.size(); ++j)
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        t += h;
    }
    return y;
}

/// Space-homogeneous kinetic system integrated by RK4: state is (f1(v), f2(v)) at a
/// single spatial point, f_i' = a (rho_i chi_i - f_i) + chi_i - rho_j f_i.
inline std::pair<std::vector<double>, std::vector<double>>
homogeneous_reference(const PhaseGrid &g, const std::vector<double> &f1, const std::vector<double> &f2, double sigma,
                      double eps, double t, int steps)
{
    const std::size_t nv = g.velocity_size();
    const auto &w = g.weights();
    const auto &c1 = g.chi1().values;
    const auto &c2 = g.chi2().values;
    const double a = sigma / (eps * eps);
    std::vector<double> y(f1);
    y.insert(y.end(), f2.begin(), f2.end());
    auto rhs = [&](double, const std::vector<double> &s) {
        double r1 = 0.0, r2 = 0.0;
        for (std::size_t k = 0; k < nv; ++k) {
            r1 += w[k] * s[k];
            r2 += w[k] * s[nv + k];
        }
        std::vector<double> d(2 * nv);
        for (std::size_t k = 0; k < nv; ++k) {
            d[k] = a * (r1 * c1[k] - s[k]) + c1[k] - r2 * s[k];
            d[nv + k] = a * (r2 * c2[k] - s[nv + k]) + c2[k] - r1 * s[nv + k];
        }
        return d;
    };
    y = rk4(rhs, y, 0.0, t, steps);
    return {std::vector<double>(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(nv)),
            std::vector<double>(y.begin() + static_cast<std::ptrdiff_t>(nv), y.end())};
}

/// Uniform-in-x state from per-velocity values.
inline StatePair uniform_state(const PhaseGrid &g, const std::vector<double> &f1, const std::vector<double> &f2)
{
    StatePair F = zero_state(g);
    for (std::size_t iv = 0; iv < g.velocity_size(); ++iv)
        for (std::size_t ix = 0; ix < g.space_size(); ++ix) {
            F.f1[iv * g.space_size() + ix] = f1[iv];
            F.f2[iv * g.space_size() + ix] = f2[iv];
        }
    return F;
}

} // namespace grkin::test
