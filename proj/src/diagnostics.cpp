// SPDX-License-Identifier: Apache-2.0

#include "grkin/diagnostics.hpp"

#include "grkin/error.hpp"
#include "grkin/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace grkin {

namespace {

// kappa ln kappa - kappa + 1 with u = kappa - 1, accurate near kappa = 1.
double phi_entropy(double u)
{
    if (std::abs(u) < 1e-2) {
        double term = u * u;
        double sum = 0.0;
        for (int n = 2; n < 24; ++n) {
            sum += term / (n * (n - 1.0));
            term *= -u;
        }
        return sum;
    }
    return (1.0 + u) * std::log1p(u) - u;
}

// (kappa - 1) ln kappa, written with log1p.
double relative_dissipation(double kappa) { return (kappa - 1.0) * std::log1p(kappa - 1.0); }

void require_positive(const StatePair &F, const PhaseGrid &grid, const char *what)
{
    if (F.f1.size() != grid.size() || F.f2.size() != grid.size())
        throw ConfigError("state shape does not match the phase grid");
    for (int s = 0; s < 2; ++s)
        for (double v : F.f(s))
            if (!(v > 0.0))
                throw InvariantViolation(std::string(what) + " requires a strictly positive state");
}

struct Extrema {
    double r1min, r1max, r2min, r2max;
};

Extrema ratio_extrema(const StatePair &F, const PhaseGrid &grid)
{
    const std::size_t ns = grid.space_size();
    double lo[2] = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    double hi[2] = {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (int s = 0; s < 2; ++s) {
        const auto &chi = grid.chi(s).values;
        const auto &f = F.f(s);
        for (std::size_t iv = 0; iv < grid.velocity_size(); ++iv) {
            const double inv = 1.0 / chi[iv];
            for (std::size_t ix = 0; ix < ns; ++ix) {
                const double r = f[iv * ns + ix] * inv;
                lo[s] = std::min(lo[s], r);
                hi[s] = std::max(hi[s], r);
            }
        }
    }
    return {lo[0], hi[0], lo[1], hi[1]};
}

// u = (1 - theta Lap)^{-1} applied in Fourier space to a spectrum in place.
void resolvent(std::span<cplx> spec, const TorusSpectral &sp, double theta)
{
    for (std::size_t s = 0; s < spec.size(); ++s)
        spec[s] /= 1.0 - theta * sp.consistent_laplacian_symbol(s);
}

// Velocity flux J_a = sum_v w v_a f of one species.
std::vector<std::vector<double>> flux(const std::vector<double> &f, const PhaseGrid &grid)
{
    const std::size_t ns = grid.space_size();
    const auto &w = grid.weights();
    std::vector<std::vector<double>> J(static_cast<std::size_t>(grid.dim()), std::vector<double>(ns, 0.0));
    for (std::size_t iv = 0; iv < grid.velocity_size(); ++iv) {
        const double *slice = f.data() + iv * ns;
        for (int a = 0; a < grid.dim(); ++a) {
            const double c = w[iv] * grid.velocity(iv, a);
            auto &Ja = J[static_cast<std::size_t>(a)];
            for (std::size_t ix = 0; ix < ns; ++ix)
                Ja[ix] += c * slice[ix];
        }
    }
    return J;
}

} // namespace

double entropy_H(const StatePair &F, const EquilibriumState &eq, const PhaseGrid &grid)
{
    require_positive(F, grid, "entropy");
    const std::size_t ns = grid.space_size();
    const auto &w = grid.weights();
    double total = 0.0;
    for (int s = 0; s < 2; ++s) {
        const auto &chi = grid.chi(s).values;
        const auto &f = F.f(s);
        const double rinf = eq.rho_inf(s);
        for (std::size_t iv = 0; iv < grid.velocity_size(); ++iv) {
            const double finf = rinf * chi[iv];
            double slice = 0.0;
            for (std::size_t ix = 0; ix < ns; ++ix)
                slice += phi_entropy(f[iv * ns + ix] / finf - 1.0);
            total += w[iv] * finf * slice;
        }
    }
    return total * grid.cell_volume();
}

ThermalDissipation dissipation_D12(const StatePair &F, const PhaseGrid &grid)
{
    require_positive(F, grid, "dissipation");
    const auto m = moments(F, grid);
    const std::size_t ns = grid.space_size();
    const auto &w = grid.weights();
    double D[2] = {0.0, 0.0};
    for (int s = 0; s < 2; ++s) {
        const auto &chi = grid.chi(s).values;
        const auto &f = F.f(s);
        const auto &rho = m.rho(s);
        for (std::size_t iv = 0; iv < grid.velocity_size(); ++iv) {
            double slice = 0.0;
            for (std::size_t ix = 0; ix < ns; ++ix) {
                const double eqv = rho[ix] * chi[iv];
                slice += eqv * relative_dissipation(f[iv * ns + ix] / eqv);
            }
            D[s] += w[iv] * slice;
        }
    }
    return {D[0] * grid.cell_volume(), D[1] * grid.cell_volume()};
}

double dissipation_D3(const StatePair &F, const PhaseGrid &grid)
{
    require_positive(F, grid, "dissipation");
    const std::size_t ns = grid.space_size();
    const auto &w = grid.weights();
    // Per species: rho, int f u, int chi u with u = ln(f / chi).
    std::vector<double> rho[2], fu[2], chiu[2];
    for (int s = 0; s < 2; ++s) {
        rho[s].assign(ns, 0.0);
        fu[s].assign(ns, 0.0);
        chiu[s].assign(ns, 0.0);
        const auto &chi = grid.chi(s).values;
        const auto &f = F.f(s);
        for (std::size_t iv = 0; iv < grid.velocity_size(); ++iv) {
            const double inv = 1.0 / chi[iv];
            for (std::size_t ix = 0; ix < ns; ++ix) {
                const double fv = f[iv * ns + ix];
                const double u = std::log(fv * inv);
                rho[s][ix] += w[iv] * fv;
                fu[s][ix] += w[iv] * fv * u;
                chiu[s][ix] += w[iv] * chi[iv] * u;
            }
        }
    }
    double total = 0.0;
    for (std::size_t ix = 0; ix < ns; ++ix)
        total += rho[1][ix] * fu[0][ix] + rho[0][ix] * fu[1][ix] - chiu[0][ix] - chiu[1][ix];
    total *= grid.cell_volume();
    if (total < -1e-12)
        throw InvariantViolation("reaction dissipation evaluated negative");
    return std::max(total, 0.0);
}

StatePair reaction_R(const StatePair &F, const PhaseGrid &grid)
{
    const auto m = moments(F, grid);
    StatePair out = zero_state(grid);
    out.time = F.time;
    const std::size_t ns = grid.space_size();
    for (int s = 0; s < 2; ++s) {
        const auto &chi = grid.chi(s).values;
        const auto &f = F.f(s);
        const auto &other = m.rho(1 - s);
        auto &o = out.f(s);
        for (std::size_t iv = 0; iv < grid.velocity_size(); ++iv)
            for (std::size_t ix = 0; ix < ns; ++ix)
                o[iv * ns + ix] = chi[iv] - other[ix] * f[iv * ns + ix];
    }
    return out;
}

StatePair transport_apply(const StatePair &F, const PhaseGrid &grid)
{
    StatePair out = zero_state(grid);
    out.time = F.time;
    const auto &sp = grid.spectral();
    const std::size_t ns = grid.space_size();
    const std::size_t nk = sp.spectral_size();
    const std::size_t nv = grid.velocity_size();
    parallel_for(2 * nv, [&](std::size_t job) {
        const int s = static_cast<int>(job / nv);
        const std::size_t iv = job % nv;
        std::vector<cplx> spec(nk);
        sp.forward(std::span<const double>(F.f(s).data() + iv * ns, ns), spec);
        for (std::size_t k = 0; k < nk; ++k) {
            cplx sym = 0.0;
            for (int a = 0; a < grid.dim(); ++a)
                sym += grid.velocity(iv, a) * sp.derivative_symbol(k, a);
            spec[k] *= sym;
        }
        sp.inverse(spec, std::span<double>(out.f(s).data() + iv * ns, ns));
    });
    return out;
}

StatePair operator_A_apply(const StatePair &F, const PhaseGrid &grid)
{
    StatePair out = zero_state(grid);
    out.time = F.time;
    const auto &sp = grid.spectral();
    const std::size_t ns = grid.space_size();
    const std::size_t nk = sp.spectral_size();
    std::vector<cplx> div(nk), spec(nk);
    std::vector<double> wfield(ns);
    for (int s = 0; s < 2; ++s) {
        const auto J = flux(F.f(s), grid);
        std::fill(div.begin(), div.end(), cplx{});
        for (int a = 0; a < grid.dim(); ++a) {
            sp.forward(J[static_cast<std::size_t>(a)], spec);
            for (std::size_t k = 0; k < nk; ++k)
                div[k] -= sp.derivative_symbol(k, a) * spec[k];
        }
        resolvent(div, sp, grid.chi(s).temperature_like);
        sp.inverse(div, wfield);
        const auto &chi = grid.chi(s).values;
        auto &o = out.f(s);
        for (std::size_t iv = 0; iv < grid.velocity_size(); ++iv)
            for (std::size_t ix = 0; ix < ns; ++ix)
                o[iv * ns + ix] = chi[iv] * wfield[ix];
    }
    return out;
}

StatePair operator_Astar_apply(const StatePair &G, const PhaseGrid &grid)
{
    const auto m = moments(G, grid);
    StatePair out = zero_state(grid);
    out.time = G.time;
    const auto &sp = grid.spectral();
    const std::size_t ns = grid.space_size();
    const std::size_t nk = sp.spectral_size();
    const int d = grid.dim();
    std::vector<cplx> uhat(nk), tmp(nk);
    std::vector<std::vector<double>> grad(static_cast<std::size_t>(d), std::vector<double>(ns));
    for (int s = 0; s < 2; ++s) {
        sp.forward(m.rho(s), uhat);
        resolvent(uhat, sp, grid.chi(s).temperature_like);
        for (int a = 0; a < d; ++a) {
            for (std::size_t k = 0; k < nk; ++k)
                tmp[k] = sp.derivative_symbol(k, a) * uhat[k];
            sp.inverse(tmp, grad[static_cast<std::size_t>(a)]);
        }
        const auto &chi = grid.chi(s).values;
        auto &o = out.f(s);
        for (std::size_t iv = 0; iv < grid.velocity_size(); ++iv)
            for (std::size_t ix = 0; ix < ns; ++ix) {
                double vg = 0.0;
                for (int a = 0; a < d; ++a)
                    vg += grid.velocity(iv, a) * grad[static_cast<std::size_t>(a)][ix];
                o[iv * ns + ix] = chi[iv] * vg;
            }
    }
    return out;
}

double modified_entropy_Gamma(const StatePair &F, const EquilibriumState &eq, const PhaseGrid &grid, double delta)
{
    const StatePair dF = combine(1.0, F, -1.0, eq.state(grid));
    return entropy_H(F, eq, grid) + delta * weighted_inner(operator_A_apply(dF, grid), dF, eq, grid);
}

DiagnosticsRecord compute_record(const StatePair &F, const EquilibriumState &eq, const PhaseGrid &grid, double delta)
{
    DiagnosticsRecord r;
    r.t = F.time;
    r.H = entropy_H(F, eq, grid);
    const auto d12 = dissipation_D12(F, grid);
    r.D1 = d12.D1;
    r.D2 = d12.D2;
    r.D3 = dissipation_D3(F, grid);
    const StatePair dF = combine(1.0, F, -1.0, eq.state(grid));
    r.dist2 = weighted_norm_sq(dF, eq, grid);
    r.coupling = weighted_inner(operator_A_apply(dF, grid), dF, eq, grid);
    r.Gamma = r.H + delta * r.coupling;
    r.micro2 = weighted_norm_sq(combine(1.0, F, -1.0, projection_Pi(F, grid)), eq, grid);
    r.R2 = weighted_norm_sq(reaction_R(F, grid), eq, grid);
    r.massdiff = conserved_mass_difference(F, grid);
    const auto ex = ratio_extrema(F, grid);
    r.r1min = ex.r1min;
    r.r1max = ex.r1max;
    r.r2min = ex.r2min;
    r.r2max = ex.r2max;
    return r;
}

bool InequalityReport::all_passed() const noexcept
{
    return std::all_of(checks.begin(), checks.end(), [](const InequalityCheck &c) { return c.passed; });
}

const InequalityCheck &InequalityReport::at(const std::string &name) const
{
    for (const auto &c : checks)
        if (c.name == name)
            return c;
    throw ConfigError("unknown inequality check: " + name);
}

InequalityReport verify_inequalities(const StatePair &F, const EquilibriumState &eq, const PhaseGrid &grid)
{
    InequalityReport rep;
    const StatePair dF = combine(1.0, F, -1.0, eq.state(grid));
    const double dist2 = weighted_norm_sq(dF, eq, grid);
    const StatePair PiF = projection_Pi(F, grid);
    const double micro2 = weighted_norm_sq(combine(1.0, F, -1.0, PiF), eq, grid);
    const double abs_floor = 1e-13;

    {
        const double lhs = weighted_inner(operator_A_apply(transport_apply(PiF, grid), grid), dF, eq, grid);
        rep.checks.push_back({"atpi_positivity", lhs, 0.0, lhs, lhs >= -abs_floor});
    }
    {
        const double lhs = std::sqrt(weighted_norm_sq(operator_A_apply(dF, grid), eq, grid));
        const double rhs = 0.5 * std::sqrt(dist2);
        rep.checks.push_back({"a_bound", lhs, rhs, rhs - lhs, lhs <= rhs * (1.0 + 1e-10) + abs_floor});
    }
    const double R2 = weighted_norm_sq(reaction_R(F, grid), eq, grid);
    {
        const auto ex = ratio_extrema(F, grid);
        const double c1 = 1.0 / ((eq.rho1_inf + eq.rho2_inf) * std::max(1.0, ex.r1max * ex.r2max));
        const double lhs = dissipation_D3(F, grid);
        const double rhs = c1 * R2;
        rep.checks.push_back({"d3_vs_r", lhs, rhs, lhs - rhs, lhs >= rhs * (1.0 - 1e-10) - abs_floor});
    }
    {
        const double lhs = std::abs(weighted_inner(transport_apply(operator_A_apply(F, grid), grid), F, eq, grid));
        rep.checks.push_back({"taf_bound", lhs, micro2, micro2 - lhs, lhs <= micro2 * (1.0 + 1e-10) + abs_floor});
    }
    {
        const auto m = moments(F, grid);
        double defect = 0.0;
        double rho_sq_min = std::numeric_limits<double>::infinity();
        for (std::size_t ix = 0; ix < grid.space_size(); ++ix) {
            const double e = 1.0 - m.rho1[ix] * m.rho2[ix];
            defect += e * e;
            rho_sq_min = std::min({rho_sq_min, m.rho1[ix] * m.rho1[ix], m.rho2[ix] * m.rho2[ix]});
        }
        defect *= grid.cell_volume();
        const double rhs = (eq.rho1_inf + eq.rho2_inf) * defect + rho_sq_min * micro2;
        rep.checks.push_back({"r_decomposition", R2, rhs, R2 - rhs, R2 >= rhs * (1.0 - 1e-10) - abs_floor});
    }
    return rep;
}

namespace {

struct LineFit {
    double slope = 0.0;
    double r_squared = 0.0;
};

LineFit fit_line(const std::vector<double> &x, const std::vector<double> &y)
{
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LineFit f;
    f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    f.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return f;
}

} // namespace

DecayFit decay_rate_fit(const std::vector<DiagnosticsRecord> &records, double t_begin, double t_end,
                        double zero_floor)
{
    std::vector<const DiagnosticsRecord *> window;
    for (const auto &r : records)
        if (r.t >= t_begin && r.t <= t_end)
            window.push_back(&r);
    DecayFit fit;
    if (!window.empty() && std::all_of(window.begin(), window.end(),
                                       [&](const DiagnosticsRecord *r) { return r->Gamma <= zero_floor; })) {
        fit.at_equilibrium = true;
        fit.lambda = std::numeric_limits<double>::infinity();
        fit.lambda_dist = std::numeric_limits<double>::infinity();
        fit.r_squared = 1.0;
        fit.r_squared_dist = 1.0;
        fit.points = window.size();
        return fit;
    }
    std::vector<double> t, lg, td, ld;
    for (const auto *r : window) {
        if (r->Gamma > zero_floor) {
            t.push_back(r->t);
            lg.push_back(std::log(r->Gamma));
        }
        if (r->dist2 > zero_floor) {
            td.push_back(r->t);
            ld.push_back(std::log(r->dist2));
        }
    }
    if (t.size() < 10)
        throw ConfigError("decay fit needs at least 10 records with positive Gamma in the window");
    const auto g = fit_line(t, lg);
    fit.lambda = -g.slope;
    fit.r_squared = g.r_squared;
    fit.points = t.size();
    if (td.size() >= 2) {
        const auto dd = fit_line(td, ld);
        fit.lambda_dist = -dd.slope;
        fit.r_squared_dist = dd.r_squared;
    }
    return fit;
}

DecayFit decay_rate_fit_tail(const std::vector<DiagnosticsRecord> &records)
{
    if (records.empty())
        throw ConfigError("decay fit needs records");
    const double t0 = records.front().t;
    const double t1 = records.back().t;
    return decay_rate_fit(records, 0.5 * (t0 + t1), t1);
}

EntropyBalance entropy_balance_check(const std::vector<DiagnosticsRecord> &records, double sigma, double floor)
{
    EntropyBalance eb;
    for (std::size_t i = 1; i + 1 < records.size(); ++i) {
        const auto &a = records[i - 1];
        const auto &b = records[i + 1];
        const auto &r = records[i];
        const double dHdt = (b.H - a.H) / (b.t - a.t);
        const double rhs = -(sigma * (r.D1 + r.D2) + r.D3);
        const double diff = std::abs(dHdt - rhs);
        const double rel = diff / std::max(std::abs(rhs), floor);
        if (rel > eb.max_relative_mismatch) {
            eb.max_relative_mismatch = rel;
            eb.t_worst = r.t;
        }
        eb.max_absolute_mismatch = std::max(eb.max_absolute_mismatch, diff);
        ++eb.points;
    }
    return eb;
}

bool gamma_monotone(const std::vector<DiagnosticsRecord> &records, double slack, double noise_floor)
{
    if (records.empty())
        return true;
    const double allowed = slack * std::abs(records.front().Gamma) + noise_floor;
    for (std::size_t i = 1; i < records.size(); ++i)
        if (records[i].Gamma - records[i - 1].Gamma > allowed)
            return false;
    return true;
}

std::vector<DeltaSweepRow> delta_sweep(const std::vector<DiagnosticsRecord> &records,
                                       const std::vector<double> &deltas)
{
    std::vector<DeltaSweepRow> rows;
    for (double delta : deltas) {
        auto recs = records;
        for (auto &r : recs)
            r.Gamma = r.H + delta * r.coupling;
        DeltaSweepRow row;
        row.delta = delta;
        row.worst_increase = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < recs.size(); ++i)
            row.worst_increase = std::max(row.worst_increase, recs[i].Gamma - recs[i - 1].Gamma);
        row.monotone = gamma_monotone(recs);
        row.fit = decay_rate_fit_tail(recs);
        rows.push_back(row);
    }
    return rows;
}

CsvSink::CsvSink(const std::string &path) : out_(path)
{
    if (!out_)
        throw ConfigError("cannot open diagnostics file: " + path);
    out_ << header() << '\n';
}

const char *CsvSink::header()
{
    return "t,H,D1,D2,D3,Gamma,dist2,micro2,R2,massdiff,r1min,r1max,r2min,r2max,coupling";
}

std::string CsvSink::format_row(const DiagnosticsRecord &r)
{
    const double v[] = {r.t,      r.H,     r.D1,       r.D2,    r.D3,    r.Gamma, r.dist2,   r.micro2,
                        r.R2,     r.massdiff, r.r1min, r.r1max, r.r2min, r.r2max, r.coupling};
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

void CsvSink::write(const DiagnosticsRecord &record)
{
    out_ << format_row(record) << '\n';
    out_.flush();
}

std::vector<DiagnosticsRecord> read_records_csv(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open diagnostics file: " + path);
    std::string line;
    if (!std::getline(in, line) || line != CsvSink::header())
        throw ConfigError("diagnostics file has an unexpected header: " + path);
    std::vector<DiagnosticsRecord> out;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::istringstream ss(line);
        std::string cell;
        std::vector<double> v;
        while (std::getline(ss, cell, ','))
            v.push_back(std::stod(cell));
        if (v.size() != 15)
            throw ConfigError("malformed diagnostics row in " + path);
        out.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10], v[11], v[12], v[13],
                       v[14]});
    }
    return out;
}

} // namespace grkin
