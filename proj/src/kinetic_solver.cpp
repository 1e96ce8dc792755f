// SPDX-License-Identifier: Apache-2.0

#include "grkin/kinetic_solver.hpp"

#include "grkin/error.hpp"
#include "grkin/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace grkin {

void ModelParams::validate() const
{
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw ConfigError("epsilon must be positive and finite");
    if (!(sigma >= 0.0) || !std::isfinite(sigma))
        throw ConfigError("sigma must be non-negative and finite");
}

Splitting parse_splitting(const std::string &name)
{
    if (name == "strang")
        return Splitting::strang;
    if (name == "lie")
        return Splitting::lie;
    throw ConfigError("unknown splitting '" + name + "' (lie|strang)");
}

std::string splitting_name(Splitting s) { return s == Splitting::strang ? "strang" : "lie"; }

void SolverConfig::validate() const
{
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw ConfigError("dt must be positive");
    if (!(t_final >= 0.0) || !std::isfinite(t_final))
        throw ConfigError("t_final must be non-negative");
    if (cadence < 1)
        throw ConfigError("cadence must be at least 1");
    if (!(bound_tolerance >= 0.0) || !(conservation_tolerance >= 0.0))
        throw ConfigError("tolerances must be non-negative");
    if (bounds && (!(bounds->rho_m > 0.0) || !(bounds->rho_M >= bounds->rho_m)))
        throw ConfigError("bounds must satisfy 0 < rho_m <= rho_M");
}

namespace {

struct Scan {
    bool finite = true;
    std::size_t bad_index = 0;
    int bad_species = -1;
    double mass_difference = 0.0;
    std::array<double, 2> rmin{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    std::array<double, 2> rmax{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    std::array<std::size_t, 2> argmin{0, 0};
    std::array<std::size_t, 2> argmax{0, 0};
};

Scan scan_state(const StatePair &F, const PhaseGrid &grid)
{
    Scan out;
    const std::size_t ns = grid.space_size();
    const auto &w = grid.weights();
    std::array<double, 2> mass{0.0, 0.0};
    for (int s = 0; s < 2; ++s) {
        const auto &f = F.f(s);
        const auto &chi = grid.chi(s).values;
        for (std::size_t iv = 0; iv < grid.velocity_size(); ++iv) {
            const double inv = 1.0 / chi[iv];
            const double *slice = f.data() + iv * ns;
            double slice_mass = 0.0;
            for (std::size_t ix = 0; ix < ns; ++ix) {
                const double value = slice[ix];
                if (!std::isfinite(value) && out.finite) {
                    out.finite = false;
                    out.bad_species = s;
                    out.bad_index = iv * ns + ix;
                }
                const double r = value * inv;
                if (r < out.rmin[s]) {
                    out.rmin[s] = r;
                    out.argmin[s] = iv * ns + ix;
                }
                if (r > out.rmax[s]) {
                    out.rmax[s] = r;
                    out.argmax[s] = iv * ns + ix;
                }
                slice_mass += value;
            }
            mass[s] += w[iv] * slice_mass;
        }
    }
    out.mass_difference = (mass[0] - mass[1]) * grid.cell_volume();
    return out;
}

BoundsReport bounds_from_scan(const Scan &sc, double rho_m, double rho_M, const PhaseGrid &grid, double tol)
{
    BoundsReport rep;
    rep.r1_min = sc.rmin[0];
    rep.r1_max = sc.rmax[0];
    rep.r2_min = sc.rmin[1];
    rep.r2_max = sc.rmax[1];
    const std::array<double, 2> lo{rho_m, 1.0 / rho_M};
    const std::array<double, 2> hi{rho_M, 1.0 / rho_m};
    const std::size_t ns = grid.space_size();
    for (int s = 0; s < 2 && rep.passed; ++s) {
        std::size_t idx = 0;
        double value = 0.0;
        const char *side = nullptr;
        if (!(sc.rmin[s] >= lo[s] * (1.0 - tol))) {
            idx = sc.argmin[s];
            value = sc.rmin[s];
            side = "below";
        } else if (!(sc.rmax[s] <= hi[s] * (1.0 + tol))) {
            idx = sc.argmax[s];
            value = sc.rmax[s];
            side = "above";
        } else {
            continue;
        }
        rep.passed = false;
        rep.species = s;
        rep.iv = idx / ns;
        rep.ix = idx % ns;
        std::ostringstream msg;
        msg.precision(17);
        msg << "f" << s + 1 << "/chi" << s + 1 << " = " << value << " " << side << " the admissible range [" << lo[s]
            << ", " << hi[s] << "] at spatial index " << rep.ix << ", velocity index " << rep.iv;
        rep.message = msg.str();
    }
    return rep;
}

} // namespace

BoundsReport check_bounds(const StatePair &F, double rho_m, double rho_M, const PhaseGrid &grid, double tol)
{
    return bounds_from_scan(scan_state(F, grid), rho_m, rho_M, grid, tol);
}

MomentFlow integrate_moment_system(double rho1, double rho2, double tau)
{
    // rho1 - rho2 = m is invariant; y = rho2 - r satisfies the Bernoulli equation
    // y' = -s y - y^2 with s = sqrt(m^2 + 4) and r the positive root of r^2 + m r = 1.
    const double m = rho1 - rho2;
    const double s = std::sqrt(m * m + 4.0);
    const double r = m > 0.0 ? 2.0 / (m + s) : 0.5 * (s - m);
    const double y0 = rho2 - r;
    const double growth = -std::expm1(-s * tau);
    const double q = y0 * growth / s;
    const double y = y0 * std::exp(-s * tau) / (1.0 + q);

    MomentFlow out;
    out.rho2 = r + y;
    out.rho1 = out.rho2 + m;
    out.int_rho2 = r * tau + std::log1p(q);
    out.int_rho1 = out.int_rho2 + m * tau;
    return out;
}

KineticSolver::KineticSolver(const PhaseGrid &grid, ModelParams params)
    : grid_(&grid), params_(params), cache_(2)
{
    params_.validate();
    spectra_.resize(grid.velocity_size() * grid.spectral().spectral_size());
}

const std::vector<cplx> &KineticSolver::phase_table(double tau)
{
    for (const auto &c : cache_)
        if (c.tau == tau)
            return c.table;
    auto &slot = cache_[cache_next_];
    cache_next_ = (cache_next_ + 1) % cache_.size();
    const auto &sp = grid_->spectral();
    const std::size_t nk = sp.spectral_size();
    const int d = grid_->dim();
    slot.tau = tau;
    slot.table.resize(grid_->velocity_size() * nk);
    const double scale = tau / params_.epsilon;
    parallel_for(grid_->velocity_size(), [&](std::size_t iv) {
        std::array<double, 3> shift{};
        for (int a = 0; a < d; ++a)
            shift[a] = -grid_->velocity(iv, a) * scale;
        sp.shift_factors(std::span<const double>(shift.data(), static_cast<std::size_t>(d)),
                         std::span<cplx>(slot.table.data() + iv * nk, nk));
    });
    return slot.table;
}

void KineticSolver::transport(StatePair &F, double tau)
{
    if (tau == 0.0)
        return;
    const auto &sp = grid_->spectral();
    const std::size_t ns = grid_->space_size();
    const std::size_t nk = sp.spectral_size();
    const auto &table = phase_table(tau);
    for (int s = 0; s < 2; ++s) {
        auto &f = F.f(s);
        parallel_for(grid_->velocity_size(), [&](std::size_t iv) {
            std::span<double> slice(f.data() + iv * ns, ns);
            std::span<cplx> spec(spectra_.data() + iv * nk, nk);
            sp.forward(slice, spec);
            const cplx *phase = table.data() + iv * nk;
            for (std::size_t k = 0; k < nk; ++k)
                spec[k] *= phase[k];
            sp.inverse(spec, slice);
        });
    }
}

void KineticSolver::reaction_relaxation(StatePair &F, double tau)
{
    if (tau == 0.0)
        return;
    const std::size_t ns = grid_->space_size();
    const auto m = moments(F, *grid_);
    const double a = params_.relaxation_rate();

    // f_i(tau) = alpha_i f_i(0) + beta_i chi_i, with alpha_i the exact damping factor and
    // beta_i fixed by the exact moment flow.
    std::vector<double> alpha1(ns), alpha2(ns), beta1(ns), beta2(ns);
    parallel_for(ns, [&](std::size_t ix) {
        const auto flow = integrate_moment_system(m.rho1[ix], m.rho2[ix], tau);
        alpha1[ix] = std::exp(-a * tau - flow.int_rho2);
        alpha2[ix] = std::exp(-a * tau - flow.int_rho1);
        beta1[ix] = flow.rho1 - alpha1[ix] * m.rho1[ix];
        beta2[ix] = flow.rho2 - alpha2[ix] * m.rho2[ix];
    });

    const auto &chi1 = grid_->chi1().values;
    const auto &chi2 = grid_->chi2().values;
    parallel_for(grid_->velocity_size(), [&](std::size_t iv) {
        double *f1 = F.f1.data() + iv * ns;
        double *f2 = F.f2.data() + iv * ns;
        const double c1 = chi1[iv];
        const double c2 = chi2[iv];
        for (std::size_t ix = 0; ix < ns; ++ix) {
            f1[ix] = alpha1[ix] * f1[ix] + beta1[ix] * c1;
            f2[ix] = alpha2[ix] * f2[ix] + beta2[ix] * c2;
        }
    });
}

void KineticSolver::step(StatePair &F, double dt, Splitting splitting)
{
    if (splitting == Splitting::strang) {
        transport(F, 0.5 * dt);
        reaction_relaxation(F, dt);
        transport(F, 0.5 * dt);
    } else {
        transport(F, dt);
        reaction_relaxation(F, dt);
    }
    F.time += dt;
}

StatePair step_transport(const StatePair &F, double dt, const ModelParams &params, const PhaseGrid &grid)
{
    if (!(dt > 0.0))
        throw ConfigError("dt must be positive");
    KineticSolver solver(grid, params);
    StatePair out = F;
    solver.transport(out, dt);
    out.time += dt;
    return out;
}

StatePair step_reaction_relaxation(const StatePair &F, double dt, const ModelParams &params, const PhaseGrid &grid)
{
    if (!(dt > 0.0))
        throw ConfigError("dt must be positive");
    KineticSolver solver(grid, params);
    StatePair out = F;
    solver.reaction_relaxation(out, dt);
    out.time += dt;
    return out;
}

StatePair step(const StatePair &F, double dt, const ModelParams &params, const PhaseGrid &grid)
{
    if (!(dt > 0.0))
        throw ConfigError("dt must be positive");
    KineticSolver solver(grid, params);
    StatePair out = F;
    solver.step(out, dt, Splitting::strang);
    return out;
}

RunSummary run(const StatePair &F0, const ModelParams &params, const SolverConfig &config, const PhaseGrid &grid,
               const StateObserver &observer)
{
    params.validate();
    config.validate();
    if (F0.f1.size() != grid.size() || F0.f2.size() != grid.size())
        throw ConfigError("initial state shape does not match the phase grid");

    KineticSolver solver(grid, params);
    RunSummary summary;
    StatePair F = F0;
    const double t0 = F0.time;

    auto audit = [&](const Scan &sc) {
        if (!sc.finite) {
            std::ostringstream msg;
            msg << "non-finite value in f" << sc.bad_species + 1 << " at t = " << F.time << " (spatial index "
                << sc.bad_index % grid.space_size() << ", velocity index " << sc.bad_index / grid.space_size() << ")";
            throw NumericalFailure(msg.str());
        }
        const double drift = std::abs(sc.mass_difference - summary.initial_mass_difference);
        summary.max_conservation_drift = std::max(summary.max_conservation_drift, drift);
        if (drift > config.conservation_tolerance * (1.0 + std::abs(summary.initial_mass_difference))) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "mass difference drifted by " << drift << " at t = " << F.time;
            throw InvariantViolation(msg.str());
        }
        if (config.bounds) {
            auto rep = bounds_from_scan(sc, config.bounds->rho_m, config.bounds->rho_M, grid, config.bound_tolerance);
            if (!rep.passed)
                throw InvariantViolation("sandwich bound violated at t = " + std::to_string(F.time) + ": " +
                                         rep.message);
            if (!summary.worst_bounds) {
                summary.worst_bounds = rep;
            } else {
                auto &wb = *summary.worst_bounds;
                wb.r1_min = std::min(wb.r1_min, rep.r1_min);
                wb.r1_max = std::max(wb.r1_max, rep.r1_max);
                wb.r2_min = std::min(wb.r2_min, rep.r2_min);
                wb.r2_max = std::max(wb.r2_max, rep.r2_max);
            }
        }
    };

    const Scan first = scan_state(F, grid);
    summary.initial_mass_difference = first.mass_difference;
    audit(first);
    if (observer)
        observer(F);

    const double span = config.t_final;
    const long n_steps = span > 0.0 ? std::max(1L, static_cast<long>(std::ceil(span / config.dt - 1e-9))) : 0L;
    double owed = 0.0; // deferred half transport of the previous Strang step
    for (long n = 1; n <= n_steps; ++n) {
        const double h = n < n_steps ? config.dt : span - static_cast<double>(n_steps - 1) * config.dt;
        const bool observe = (n % config.cadence == 0) || n == n_steps;
        if (config.splitting == Splitting::strang) {
            solver.transport(F, 0.5 * h + owed);
            solver.reaction_relaxation(F, h);
            if (observe) {
                solver.transport(F, 0.5 * h);
                owed = 0.0;
            } else {
                owed = 0.5 * h;
            }
        } else {
            solver.transport(F, h);
            solver.reaction_relaxation(F, h);
        }
        F.time = n == n_steps ? t0 + span : t0 + static_cast<double>(n) * config.dt;
        audit(scan_state(F, grid));
        if (observe && observer)
            observer(F);
    }
    summary.steps = n_steps;
    summary.final_state = std::move(F);
    return summary;
}

} // namespace grkin
