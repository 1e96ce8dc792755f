// SPDX-License-Identifier: Apache-2.0

#include "grkin/phase_grid.hpp"

#include "grkin/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace grkin {

PhaseGrid::PhaseGrid(int dim, int nx, Equilibrium chi1, Equilibrium chi2)
    : dim_(dim), nx_(nx), chi1_(std::move(chi1)), chi2_(std::move(chi2))
{
    if (dim < 1 || dim > 3)
        throw ConfigError("spatial dimension must be 1, 2 or 3");
    if (nx < 2)
        throw ConfigError("nx must be at least 2");
    if (chi1_.dim != dim || chi2_.dim != dim)
        throw ConfigError("equilibria must have the spatial dimension of the grid");
    if (chi1_.nodes != chi2_.nodes || chi1_.weights != chi2_.weights)
        throw ConfigError("both species must share one velocity node set");
    for (const auto *chi : {&chi1_, &chi2_}) {
        const auto report = validate_equilibrium(*chi);
        if (!report.all_passed()) {
            std::ostringstream msg;
            msg << "invalid equilibrium:";
            for (const auto &c : report.checks)
                if (!c.passed)
                    msg << ' ' << c.name << " (residual " << c.residual << ')';
            throw ConfigError(msg.str());
        }
    }
    nspace_ = 1;
    for (int a = 0; a < dim; ++a)
        nspace_ *= static_cast<std::size_t>(nx);
    nvel_ = chi1_.size();
    cell_volume_ = 1.0 / static_cast<double>(nspace_);
    spectral_ = std::make_shared<TorusSpectral>(dim, nx);
}

double PhaseGrid::x_coord(std::size_t ix, int a) const noexcept
{
    std::size_t rem = ix;
    for (int b = dim_ - 1; b > a; --b)
        rem /= static_cast<std::size_t>(nx_);
    return static_cast<double>(rem % static_cast<std::size_t>(nx_)) / nx_;
}

StatePair zero_state(const PhaseGrid &grid)
{
    return StatePair{std::vector<double>(grid.size(), 0.0), std::vector<double>(grid.size(), 0.0), 0.0};
}

StatePair combine(double a, const StatePair &F, double b, const StatePair &G)
{
    StatePair out{F.f1, F.f2, F.time};
    for (int s = 0; s < 2; ++s) {
        auto &o = out.f(s);
        const auto &g = G.f(s);
        for (std::size_t i = 0; i < o.size(); ++i)
            o[i] = a * o[i] + b * g[i];
    }
    return out;
}

StatePair EquilibriumState::state(const PhaseGrid &grid) const
{
    StatePair F = zero_state(grid);
    const std::size_t ns = grid.space_size();
    for (int s = 0; s < 2; ++s) {
        const auto &chi = grid.chi(s).values;
        auto &f = F.f(s);
        for (std::size_t iv = 0; iv < grid.velocity_size(); ++iv)
            std::fill_n(f.begin() + static_cast<std::ptrdiff_t>(iv * ns), ns, rho_inf(s) * chi[iv]);
    }
    return F;
}

MacroFields moments(const StatePair &F, const PhaseGrid &grid)
{
    if (F.f1.size() != grid.size() || F.f2.size() != grid.size())
        throw ConfigError("state shape does not match the phase grid");
    const std::size_t ns = grid.space_size();
    const auto &w = grid.weights();
    MacroFields m{std::vector<double>(ns, 0.0), std::vector<double>(ns, 0.0)};
    for (int s = 0; s < 2; ++s) {
        const auto &f = F.f(s);
        auto &rho = m.rho(s);
        for (std::size_t iv = 0; iv < grid.velocity_size(); ++iv) {
            const double wv = w[iv];
            const double *slice = f.data() + iv * ns;
            for (std::size_t ix = 0; ix < ns; ++ix)
                rho[ix] += wv * slice[ix];
        }
    }
    return m;
}

double weighted_inner(const StatePair &F, const StatePair &G, const EquilibriumState &eq, const PhaseGrid &grid)
{
    const std::size_t ns = grid.space_size();
    const auto &w = grid.weights();
    double total = 0.0;
    for (int s = 0; s < 2; ++s) {
        const auto &f = F.f(s);
        const auto &g = G.f(s);
        const auto &chi = grid.chi(s).values;
        double species_sum = 0.0;
        for (std::size_t iv = 0; iv < grid.velocity_size(); ++iv) {
            double slice_sum = 0.0;
            const std::size_t off = iv * ns;
            for (std::size_t ix = 0; ix < ns; ++ix)
                slice_sum += f[off + ix] * g[off + ix];
            species_sum += slice_sum * w[iv] / chi[iv];
        }
        total += species_sum / eq.rho_inf(s);
    }
    return total * grid.cell_volume();
}

double weighted_norm_sq(const StatePair &F, const EquilibriumState &eq, const PhaseGrid &grid)
{
    return weighted_inner(F, F, eq, grid);
}

StatePair projection_Pi(const StatePair &F, const PhaseGrid &grid)
{
    const auto m = moments(F, grid);
    StatePair out = zero_state(grid);
    out.time = F.time;
    const std::size_t ns = grid.space_size();
    for (int s = 0; s < 2; ++s) {
        const auto &chi = grid.chi(s).values;
        const auto &rho = m.rho(s);
        auto &o = out.f(s);
        for (std::size_t iv = 0; iv < grid.velocity_size(); ++iv)
            for (std::size_t ix = 0; ix < ns; ++ix)
                o[iv * ns + ix] = rho[ix] * chi[iv];
    }
    return out;
}

StatePair projection_PiOmega(const StatePair &F, const PhaseGrid &grid)
{
    const auto m = moments(F, grid);
    StatePair out = zero_state(grid);
    out.time = F.time;
    const std::size_t ns = grid.space_size();
    for (int s = 0; s < 2; ++s) {
        double mean = 0.0;
        for (double r : m.rho(s))
            mean += r;
        mean *= grid.cell_volume();
        const auto &chi = grid.chi(s).values;
        auto &o = out.f(s);
        for (std::size_t iv = 0; iv < grid.velocity_size(); ++iv)
            std::fill_n(o.begin() + static_cast<std::ptrdiff_t>(iv * ns), ns, mean * chi[iv]);
    }
    return out;
}

double conserved_mass_difference(const StatePair &F, const PhaseGrid &grid)
{
    const auto m = moments(F, grid);
    double diff = 0.0;
    for (std::size_t ix = 0; ix < grid.space_size(); ++ix)
        diff += m.rho1[ix] - m.rho2[ix];
    return diff * grid.cell_volume();
}

EquilibriumState equilibrium_from_mass_difference(double m)
{
    if (!std::isfinite(m))
        throw NumericalFailure("mass difference is not finite");
    const double root = std::sqrt(m * m + 4.0);
    // Stable branch of (m + sqrt(m^2 + 4)) / 2 for either sign of m.
    const double rho1 = m >= 0.0 ? 0.5 * (m + root) : 2.0 / (root - m);
    return EquilibriumState{rho1, 1.0 / rho1};
}

EquilibriumState equilibrium_state(const StatePair &F0, const PhaseGrid &grid)
{
    return equilibrium_from_mass_difference(conserved_mass_difference(F0, grid));
}

std::vector<double> Profile::sample(const PhaseGrid &grid) const
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const std::size_t ns = grid.space_size();
    const int d = grid.dim();
    std::vector<double> r(ns, mean);
    switch (kind) {
    case Kind::constant:
        break;
    case Kind::cosine:
        for (std::size_t ix = 0; ix < ns; ++ix) {
            double arg = phase;
            for (int a = 0; a < d; ++a)
                arg += two_pi * mode[a] * grid.x_coord(ix, a);
            r[ix] = mean + amplitude * std::cos(arg);
        }
        break;
    case Kind::step: {
        // Smoothed periodic plateau: +amplitude on the middle half of the first axis.
        if (!(width > 0.0))
            throw ConfigError("step profile width must be positive");
        for (std::size_t ix = 0; ix < ns; ++ix) {
            const double x = grid.x_coord(ix, 0);
            const double s = 0.5 * (std::tanh(std::sin(two_pi * (x - 0.25)) / width) + 1.0);
            r[ix] = mean + amplitude * (2.0 * s - 1.0);
        }
        break;
    }
    case Kind::random: {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> coef(-1.0, 1.0);
        std::uniform_real_distribution<double> ph(0.0, two_pi);
        std::vector<double> g(ns, 0.0);
        for (int m = 1; m <= random_modes; ++m) {
            for (int a = 0; a < d; ++a) {
                const double c = coef(rng) / m;
                const double p = ph(rng);
                for (std::size_t ix = 0; ix < ns; ++ix)
                    g[ix] += c * std::cos(two_pi * m * grid.x_coord(ix, a) + p);
            }
        }
        double gmax = 0.0;
        for (double v : g)
            gmax = std::max(gmax, std::abs(v));
        for (std::size_t ix = 0; ix < ns; ++ix)
            r[ix] = mean + (gmax > 0.0 ? amplitude * g[ix] / gmax : 0.0);
        break;
    }
    }
    return r;
}

Profile::Kind parse_profile_kind(const std::string &name)
{
    if (name == "constant")
        return Profile::Kind::constant;
    if (name == "cosine")
        return Profile::Kind::cosine;
    if (name == "step")
        return Profile::Kind::step;
    if (name == "random")
        return Profile::Kind::random;
    throw ConfigError("unknown profile kind '" + name + "' (constant|cosine|step|random)");
}

std::string profile_kind_name(Profile::Kind kind)
{
    switch (kind) {
    case Profile::Kind::constant:
        return "constant";
    case Profile::Kind::cosine:
        return "cosine";
    case Profile::Kind::step:
        return "step";
    case Profile::Kind::random:
        return "random";
    }
    return "constant";
}

StatePair make_initial_condition(const InitialCondition &ic, const PhaseGrid &grid, double rho_m, double rho_M)
{
    if (!(rho_m > 0.0) || !(rho_M >= rho_m) || !std::isfinite(rho_M))
        throw ConfigError("bounds must satisfy 0 < rho_m <= rho_M < inf");
    if (ic.micro_amplitude != 0.0 && !ic.unchecked)
        throw ConfigError("velocity-dependent perturbations require the unchecked flag");
    if (std::abs(ic.micro_amplitude) >= 1.0)
        throw ConfigError("micro_amplitude must lie in (-1, 1) to keep f positive");

    const std::array<std::vector<double>, 2> r{ic.species1.sample(grid), ic.species2.sample(grid)};
    const std::array<double, 2> lo{rho_m, 1.0 / rho_M};
    const std::array<double, 2> hi{rho_M, 1.0 / rho_m};
    if (!ic.unchecked) {
        for (int s = 0; s < 2; ++s) {
            const auto [mn, mx] = std::minmax_element(r[s].begin(), r[s].end());
            if (*mn < lo[s] || *mx > hi[s]) {
                std::ostringstream msg;
                msg << "initial profile of species " << s + 1 << " spans [" << *mn << ", " << *mx
                    << "], outside the admissible range [" << lo[s] << ", " << hi[s] << "]";
                throw ConfigError(msg.str());
            }
        }
    }

    constexpr double two_pi = 2.0 * std::numbers::pi;
    StatePair F = zero_state(grid);
    const std::size_t ns = grid.space_size();
    for (int s = 0; s < 2; ++s) {
        const auto &chi = grid.chi(s).values;
        auto &f = F.f(s);
        for (std::size_t iv = 0; iv < grid.velocity_size(); ++iv) {
            const double micro_v = ic.micro_amplitude * std::tanh(grid.velocity(iv, 0));
            for (std::size_t ix = 0; ix < ns; ++ix) {
                const double micro = micro_v * std::sin(two_pi * grid.x_coord(ix, 0));
                f[iv * ns + ix] = r[s][ix] * chi[iv] * (1.0 + micro);
            }
        }
    }
    return F;
}

StatePair make_random_bounded_state(const PhaseGrid &grid, double rho_m, double rho_M, std::uint64_t seed)
{
    if (!(rho_m > 0.0) || !(rho_M >= rho_m))
        throw ConfigError("bounds must satisfy 0 < rho_m <= rho_M");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const std::array<double, 2> lo{rho_m, 1.0 / rho_M};
    const std::array<double, 2> hi{rho_M, 1.0 / rho_m};
    StatePair F = zero_state(grid);
    const std::size_t ns = grid.space_size();
    const int mode = 1 + static_cast<int>(unit(rng) * 3.0);
    const double noise = 0.5 * unit(rng);
    for (int s = 0; s < 2; ++s) {
        // Sub-interval of the admissible range so extrema vary between draws.
        const double a = unit(rng), b = unit(rng);
        const double u_lo = std::min(a, b), u_hi = std::max(a, b);
        const auto &chi = grid.chi(s).values;
        auto &f = F.f(s);
        for (std::size_t iv = 0; iv < grid.velocity_size(); ++iv) {
            const double phase = two_pi * unit(rng);
            for (std::size_t ix = 0; ix < ns; ++ix) {
                double arg = phase;
                for (int ax = 0; ax < grid.dim(); ++ax)
                    arg += two_pi * mode * grid.x_coord(ix, ax);
                const double smooth = 0.5 * (1.0 + std::sin(arg));
                const double u = (1.0 - noise) * smooth + noise * unit(rng);
                const double kappa = lo[s] + (hi[s] - lo[s]) * (u_lo + (u_hi - u_lo) * u);
                f[iv * ns + ix] = kappa * chi[iv];
            }
        }
    }
    return F;
}

} // namespace grkin
