// SPDX-License-Identifier: Apache-2.0

#include "grkin/rd_solver.hpp"

#include "grkin/error.hpp"
#include "grkin/kinetic_solver.hpp"
#include "grkin/parallel.hpp"
#include "grkin/phase_grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace grkin {

void RDParams::validate() const
{
    if (!(D1 >= 0.0) || !(D2 >= 0.0) || !std::isfinite(D1) || !std::isfinite(D2))
        throw ConfigError("diffusion coefficients must be finite and non-negative");
}

namespace {

void heat(std::vector<double> &rho, double D, double tau, const TorusSpectral &sp)
{
    std::vector<cplx> spec(sp.spectral_size());
    sp.forward(rho, spec);
    for (std::size_t k = 0; k < spec.size(); ++k)
        spec[k] *= std::exp(D * sp.laplacian_symbol(k) * tau);
    sp.inverse(spec, rho);
}

void audit(const RDState &s)
{
    for (int sp = 0; sp < 2; ++sp) {
        const auto &rho = sp == 0 ? s.rho1 : s.rho2;
        for (std::size_t ix = 0; ix < rho.size(); ++ix)
            if (!std::isfinite(rho[ix]) || rho[ix] < 0.0) {
                std::ostringstream msg;
                msg << "reaction-diffusion density rho" << sp + 1 << " became " << rho[ix] << " at cell " << ix
                    << ", t = " << s.t;
                throw NumericalFailure(msg.str());
            }
    }
}

double mean(const std::vector<double> &a)
{
    double s = 0.0;
    for (double v : a)
        s += v;
    return s / static_cast<double>(a.size());
}

} // namespace

RDState rd_step(const RDState &state, double dt, const RDParams &params, const TorusSpectral &grid)
{
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw ConfigError("time step must be positive");
    params.validate();
    if (state.rho1.size() != grid.space_size() || state.rho2.size() != grid.space_size())
        throw ConfigError("reaction-diffusion state does not match the spatial grid");
    RDState out = state;
    heat(out.rho1, params.D1, 0.5 * dt, grid);
    heat(out.rho2, params.D2, 0.5 * dt, grid);
    if (params.reaction) {
        parallel_for(out.rho1.size(), [&](std::size_t ix) {
            const auto flow = integrate_moment_system(out.rho1[ix], out.rho2[ix], dt);
            out.rho1[ix] = flow.rho1;
            out.rho2[ix] = flow.rho2;
        });
    }
    heat(out.rho1, params.D1, 0.5 * dt, grid);
    heat(out.rho2, params.D2, 0.5 * dt, grid);
    out.t = state.t + dt;
    audit(out);
    return out;
}

double l2_distance(const std::vector<double> &a, const std::vector<double> &b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s / static_cast<double>(a.size()));
}

RDRecord rd_record(const RDState &state, double rho1_inf, double rho2_inf)
{
    RDRecord r;
    r.t = state.t;
    const std::vector<double> e1(state.rho1.size(), rho1_inf), e2(state.rho2.size(), rho2_inf);
    r.dist1 = l2_distance(state.rho1, e1);
    r.dist2 = l2_distance(state.rho2, e2);
    r.massdiff = mean(state.rho1) - mean(state.rho2);
    const auto [a1, b1] = std::minmax_element(state.rho1.begin(), state.rho1.end());
    const auto [a2, b2] = std::minmax_element(state.rho2.begin(), state.rho2.end());
    r.rho1_min = *a1;
    r.rho1_max = *b1;
    r.rho2_min = *a2;
    r.rho2_max = *b2;
    return r;
}

RDRunSummary rd_run(const RDState &state0, double t_final, double dt, const RDParams &params,
                    const TorusSpectral &grid, const RDObserver &observer, int cadence)
{
    if (!(t_final >= state0.t))
        throw ConfigError("final time precedes the initial time");
    if (!(dt > 0.0))
        throw ConfigError("time step must be positive");
    if (cadence < 1)
        throw ConfigError("cadence must be at least 1");
    params.validate();
    audit(state0);
    const double m0 = mean(state0.rho1) - mean(state0.rho2);
    const auto eq = equilibrium_from_mass_difference(m0);

    RDRunSummary sum;
    sum.final_state = state0;
    if (observer)
        observer(state0, rd_record(state0, eq.rho1_inf, eq.rho2_inf));
    const double span = t_final - state0.t;
    const auto nsteps = static_cast<std::size_t>(std::ceil(span / dt - 1e-9));
    for (std::size_t n = 0; n < nsteps; ++n) {
        const double target = n + 1 == nsteps ? t_final : state0.t + static_cast<double>(n + 1) * dt;
        sum.final_state = rd_step(sum.final_state, target - sum.final_state.t, params, grid);
        sum.final_state.t = target;
        ++sum.steps;
        const double drift = std::abs(mean(sum.final_state.rho1) - mean(sum.final_state.rho2) - m0);
        sum.max_mean_drift = std::max(sum.max_mean_drift, drift);
        if (observer && ((n + 1) % static_cast<std::size_t>(cadence) == 0 || n + 1 == nsteps))
            observer(sum.final_state, rd_record(sum.final_state, eq.rho1_inf, eq.rho2_inf));
    }
    return sum;
}

const char *rd_csv_header() { return "t,dist1,dist2,massdiff,rho1min,rho1max,rho2min,rho2max"; }

std::string rd_csv_row(const RDRecord &r)
{
    const double v[] = {r.t, r.dist1, r.dist2, r.massdiff, r.rho1_min, r.rho1_max, r.rho2_min, r.rho2_max};
    std::string line;
    char buf[32];
    for (std::size_t i = 0; i < std::size(v); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", v[i]);
        if (i)
            line += ',';
        line += buf;
    }
    return line;
}

} // namespace grkin
