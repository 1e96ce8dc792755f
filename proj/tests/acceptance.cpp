// SPDX-License-Identifier: Apache-2.0
// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include "grkin/diagnostics.hpp"
#include "grkin/error.hpp"
#include "grkin/experiments.hpp"
#include "grkin/rd_solver.hpp"
#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>

using namespace grkin;
using namespace grkin::test;

namespace {

// Pinned tolerances.
constexpr double bound_rel_tol = 1e-8;
constexpr double conservation_tol = 1e-10;
constexpr double decay_r2_min = 0.99;
constexpr double gamma_delta = 0.05;
constexpr double balance_tol = 1e-3;
constexpr double balance_shrink = 3.5;
constexpr int battery_states = 100;
constexpr double adjoint_tol = 1e-10;
constexpr double single_mode_tol = 1e-10;
constexpr double d3_naive_tol = 1e-12;
constexpr double oracle_tol = 1e-5;
constexpr double oracle_ratio_lo = 3.5, oracle_ratio_hi = 4.5;
constexpr double micro_ratio_lo = 1.6, micro_ratio_hi = 2.4;
constexpr double diffusion_tol = 1e-8;
constexpr double heat_tol = 1e-8;
constexpr double closed_form_tol = 1e-8;
constexpr double runtime_bound_s = 60.0;
constexpr double sweep_runtime_s = 600.0;

struct Outcome {
    bool passed = false;
    std::string detail;
};

std::string out_dir(const std::string &name) { return std::string(GRKIN_ACCEPTANCE_OUT) + "/" + name; }

ExperimentConfig preset(const std::string &file, const std::string &out)
{
    auto c = ExperimentConfig::load(std::string(GRKIN_CONFIG_DIR) + "/" + file);
    c.output_dir = out_dir(out);
    return c;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char *f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// Shared by criteria 1 and 2: the sigma = 1, eps = 1, T = 10 run with every step audited
// by the solver and every recorded state re-checked here.
struct LongRun {
    double worst_bound_excess = 0.0;
    double max_drift = 0.0;
    double m0 = 0.0;
    std::size_t states = 0;
    double seconds = 0.0;
    std::string error;
};

const LongRun &long_run()
{
    static const LongRun result = [] {
        LongRun lr;
        auto c = preset("decay.ini", "bounds");
        c.sigma = 1.0;
        c.cadence = 10;
        auto g = c.make_grid();
        auto F0 = initial_state(c, g);
        lr.m0 = conserved_mass_difference(F0, g);
        const auto t0 = std::chrono::steady_clock::now();
        try {
            auto sc = c.solver();
            sc.bound_tolerance = bound_rel_tol;
            sc.conservation_tolerance = conservation_tol;
            (void)run(F0, c.model(), sc, g, [&](const StatePair &F) {
                auto rep = check_bounds(F, c.rho_m, c.rho_M, g, bound_rel_tol);
                const double lo = std::min(rep.r1_min, rep.r2_min), hi = std::max(rep.r1_max, rep.r2_max);
                lr.worst_bound_excess = std::max({lr.worst_bound_excess, (c.rho_m - lo) / c.rho_m,
                                                  (hi - c.rho_M) / c.rho_M});
                lr.max_drift = std::max(lr.max_drift, std::abs(conserved_mass_difference(F, g) - lr.m0));
                ++lr.states;
            });
        } catch (const Error &e) {
            lr.error = e.what();
        }
        lr.seconds = seconds_since(t0);
        return lr;
    }();
    return result;
}

Outcome criterion_bounds()
{
    const auto &lr = long_run();
    if (!lr.error.empty())
        return {false, lr.error};
    return {lr.worst_bound_excess <= bound_rel_tol && lr.seconds <= runtime_bound_s,
            fmt("%zu states, worst relative excursion %.3g (tol %.0e), %.1f s", lr.states, lr.worst_bound_excess,
                bound_rel_tol, lr.seconds)};
}

Outcome criterion_conservation()
{
    const auto &lr = long_run();
    if (!lr.error.empty())
        return {false, lr.error};
    const double limit = conservation_tol * (1.0 + std::abs(lr.m0));
    return {lr.max_drift <= limit, fmt("max drift %.3g, limit %.3g", lr.max_drift, limit)};
}

Outcome criterion_decay()
{
    auto c = preset("decay.ini", "decay");
    c.delta = gamma_delta;
    auto r = run_decay(c);
    bool ok = !r.series.empty();
    std::string detail;
    for (const auto &s : r.series) {
        ok = ok && s.fit.lambda > 0.0 && s.fit.r_squared >= decay_r2_min && s.monotone;
        detail += fmt("sigma=%g: lambda=%.4f R2=%.5f monotone=%s; ", s.sigma, s.fit.lambda, s.fit.r_squared,
                      s.monotone ? "yes" : "no");
    }
    return {ok, detail};
}

Outcome criterion_balance()
{
    auto c = preset("decay.ini", "balance");
    auto g = c.make_grid();
    auto F0 = initial_state(c, g);
    auto eq = equilibrium_state(F0, g);
    bool ok = true;
    std::string detail;
    for (double sigma : {1.0, 0.0}) {
        double mm[2];
        for (int k = 0; k < 2; ++k) {
            SolverConfig sc = c.solver();
            sc.dt = k == 0 ? 1e-3 : 5e-4;
            sc.t_final = 1.0;
            sc.cadence = 1;
            std::vector<DiagnosticsRecord> recs;
            (void)run(F0, ModelParams{c.epsilon, sigma}, sc, g,
                      [&](const StatePair &F) { recs.push_back(compute_record(F, eq, g, c.delta)); });
            mm[k] = entropy_balance_check(recs, sigma).max_relative_mismatch;
        }
        ok = ok && mm[0] <= balance_tol && mm[0] / mm[1] >= balance_shrink;
        detail += fmt("sigma=%g: mismatch %.3g at dt=1e-3, %.3g at dt/2 (x%.2f); ", sigma, mm[0], mm[1], mm[0] / mm[1]);
    }
    return {ok, detail};
}

Outcome criterion_battery()
{
    auto c = preset("inequalities.ini", "inequalities");
    c.battery_states = battery_states;
    auto r = run_inequality_battery(c);
    std::string detail = fmt("%d states; ", r.states);
    for (const auto &s : r.checks)
        detail += fmt("%s: %d failures, min rel margin %.3g; ", s.name.c_str(), s.failures, s.min_relative_margin);
    return {r.passed && r.states == battery_states, detail};
}

Outcome criterion_operators()
{
    auto g = gaussian_grid(1, 64, 64);
    EquilibriumState eq{1.0, 1.0};
    double adjoint = 0.0;
    for (std::uint64_t k = 0; k < 20; ++k) {
        auto F = make_random_bounded_state(g, 0.5, 2.0, 500 + k);
        auto G = random_signed_state(g, 900 + k);
        adjoint = std::max(adjoint, std::abs(weighted_inner(operator_A_apply(F, g), G, eq, g) -
                                             weighted_inner(F, operator_Astar_apply(G, g), eq, g)));
    }

    const double a = 0.3;
    StatePair F = zero_state(g);
    const std::size_t ns = g.space_size();
    for (std::size_t iv = 0; iv < g.velocity_size(); ++iv)
        for (std::size_t ix = 0; ix < ns; ++ix) {
            F.f1[iv * ns + ix] = g.chi1().values[iv] * (1.0 + a * g.velocity(iv, 0) * std::sin(two_pi * g.x_coord(ix, 0)));
            F.f2[iv * ns + ix] = g.chi2().values[iv];
        }
    auto AF = operator_A_apply(F, g);
    double mode = 0.0;
    for (std::size_t iv = 0; iv < g.velocity_size(); ++iv)
        for (std::size_t ix = 0; ix < ns; ++ix) {
            const double w1 = -two_pi * a * std::cos(two_pi * g.x_coord(ix, 0)) / (1.0 + two_pi * two_pi);
            mode = std::max(mode, std::abs(AF.f1[iv * ns + ix] - g.chi1().values[iv] * w1));
        }

    auto small = gaussian_grid(1, 8, 8);
    double d3 = 0.0;
    for (std::uint64_t k = 0; k < 10; ++k) {
        auto S = make_random_bounded_state(small, 0.5, 2.0, 40 + k);
        d3 = std::max(d3, std::abs(dissipation_D3(S, small) - naive_D3(S, small)));
    }
    return {adjoint <= adjoint_tol && mode <= single_mode_tol && d3 <= d3_naive_tol,
            fmt("adjoint residual %.3g, single-mode error %.3g, D3 factorized vs naive %.3g", adjoint, mode, d3)};
}

Outcome criterion_oracle()
{
    auto c = preset("oracle_check.ini", "oracle");
    auto r = run_oracle_check(c);
    const bool ok = r.sup <= oracle_tol && r.ratio >= oracle_ratio_lo && r.ratio <= oracle_ratio_hi;
    return {ok, fmt("sup %.3g at dt=%g, %.3g at dt/2, ratio %.3f, Picard %d iterations (residual %.2g)", r.sup, c.dt,
                    r.sup_half, r.ratio, r.picard_iterations, r.picard_residual)};
}

Outcome criterion_limit()
{
    auto c = preset("eps_sweep.ini", "eps_sweep");
    const auto t0 = std::chrono::steady_clock::now();
    auto r = run_eps_sweep(c);
    const double secs = seconds_since(t0);
    bool ratios = r.micro_ratio1.size() + 1 == r.rows.size();
    for (const auto *v : {&r.micro_ratio1, &r.micro_ratio2})
        for (double q : *v)
            ratios = ratios && q >= micro_ratio_lo && q <= micro_ratio_hi;
    std::string detail;
    for (const auto &row : r.rows)
        detail += fmt("eps=%g err=(%.3g, %.3g) micro=(%.3g, %.3g); ", row.epsilon, row.err1, row.err2, row.micro1,
                      row.micro2);
    detail += "micro ratios";
    for (std::size_t i = 0; i < r.micro_ratio1.size(); ++i)
        detail += fmt(" (%.3f, %.3f)", r.micro_ratio1[i], r.micro_ratio2[i]);
    detail += "; error orders";
    for (double q : r.err_order1)
        detail += fmt(" %.2f", q);
    detail += fmt("; %.1f s", secs);
    return {r.errors_decreasing && ratios && secs <= sweep_runtime_s, detail};
}

Outcome criterion_diffusion()
{
    double worst = 0.0;
    for (int d = 1; d <= 3; ++d) {
        auto chi = make_gaussian(1.0, d, 8.0, d == 3 ? 32 : 64);
        worst = std::max(worst, std::abs(diffusion_coefficient(chi, 1.0) - 1.0));
    }
    const int n = 64, k = 3;
    TorusSpectral sp(1, n);
    RDState s{std::vector<double>(n), std::vector<double>(n, 1.0), 0.0};
    for (int i = 0; i < n; ++i)
        s.rho1[i] = 1.0 + 0.5 * std::cos(two_pi * k * i / n);
    const RDParams p{0.01, 1.0, false};
    const double t = 0.25;
    auto out = rd_run(s, t, 1e-3, p, sp).final_state;
    double heat = 0.0;
    const double amp = 0.5 * std::exp(-p.D1 * std::pow(two_pi * k, 2) * t);
    for (int i = 0; i < n; ++i)
        heat = std::max(heat, std::abs(out.rho1[i] - (1.0 + amp * std::cos(two_pi * k * i / n))));
    return {worst <= diffusion_tol && heat <= heat_tol,
            fmt("max |D - 1/sigma| over d=1,2,3: %.3g; heat-mode error %.3g", worst, heat)};
}

Outcome criterion_closed_forms()
{
    auto g = gaussian_grid(1, 16, 64);
    auto scaled = [&](double k1, double k2) {
        auto a = g.chi1().values, b = g.chi2().values;
        for (auto &x : a)
            x *= k1;
        for (auto &x : b)
            x *= k2;
        return uniform_state(g, a, b);
    };
    const double h_err = std::abs(entropy_H(scaled(2, 2), EquilibriumState{1, 1}, g) - 2 * (2 * std::log(2.0) - 1));
    const double d3_err = std::abs(dissipation_D3(scaled(2, 1), g) - std::log(2.0));

    SolverConfig sc;
    sc.dt = 0.01;
    sc.t_final = 1.0;
    auto end = run(zero_state(g), ModelParams{1.0, 1.0}, sc, g).final_state;
    auto m = moments(end, g);
    double tanh_err = 0.0;
    for (std::size_t ix = 0; ix < g.space_size(); ++ix)
        tanh_err = std::max({tanh_err, std::abs(m.rho1[ix] - std::tanh(1.0)), std::abs(m.rho2[ix] - std::tanh(1.0))});

    auto eq = equilibrium_from_mass_difference(1.5);
    const double root_err = std::max(std::abs(eq.rho1_inf - 2.0), std::abs(eq.rho2_inf - 0.5));
    const double worst = std::max({h_err, d3_err, tanh_err, root_err});
    return {worst <= closed_form_tol,
            fmt("H %.2g, D3 %.2g, tanh %.2g, roots %.2g", h_err, d3_err, tanh_err, root_err)};
}

} // namespace

int main()
{
    std::filesystem::create_directories(GRKIN_ACCEPTANCE_OUT);
    const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria{
        {"sandwich bounds over the T=10 run", criterion_bounds},
        {"mass-difference conservation", criterion_conservation},
        {"exponential decay of Gamma (sigma = 1 and 0)", criterion_decay},
        {"entropy balance and its dt order", criterion_balance},
        {"inequality battery on 100 random states", criterion_battery},
        {"operator correctness", criterion_operators},
        {"solver vs mild-solution oracle", criterion_oracle},
        {"diffusive limit eps sweep", criterion_limit},
        {"diffusion coefficient and heat modes", criterion_diffusion},
        {"closed-form checkpoints", criterion_closed_forms},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            o = criteria[i].second();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.passed ? 0 : 1;
        std::printf("criterion %2zu %s: %s [%s] (%.1f s)\n", i + 1, o.passed ? "PASS" : "FAIL", criteria[i].first,
                    o.detail.c_str(), seconds_since(t0));
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
