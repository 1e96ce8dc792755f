// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "grkin/error.hpp"
#include "support.hpp"

#include <cstdio>
#include <filesystem>

using namespace grkin;
using namespace grkin::test;

namespace {

StatePair scaled_chi(const PhaseGrid &g, double k1, double k2)
{
    std::vector<double> a(g.chi1().values), b(g.chi2().values);
    for (auto &x : a)
        x *= k1;
    for (auto &x : b)
        x *= k2;
    return uniform_state(g, a, b);
}

// Per-node velocity perturbation chi (1 + a v sin(2 pi k x)) of species 1; species 2 at chi.
StatePair flux_mode(const PhaseGrid &g, double a, int k)
{
    StatePair F = zero_state(g);
    const std::size_t ns = g.space_size();
    for (std::size_t iv = 0; iv < g.velocity_size(); ++iv)
        for (std::size_t ix = 0; ix < ns; ++ix) {
            const double s = std::sin(two_pi * k * g.x_coord(ix, 0));
            F.f1[iv * ns + ix] = g.chi1().values[iv] * (1.0 + a * g.velocity(iv, 0) * s);
            F.f2[iv * ns + ix] = g.chi2().values[iv];
        }
    return F;
}

} // namespace

TEST_CASE("entropy closed forms")
{
    auto g = gaussian_grid(1, 16, 64);
    EquilibriumState eq{1.0, 1.0};
    CHECK(entropy_H(eq.state(g), eq, g) == doctest::Approx(0.0));
    CHECK(std::abs(entropy_H(scaled_chi(g, 2.0, 2.0), eq, g) - 2.0 * (2.0 * std::log(2.0) - 1.0)) < 1e-8);

    EquilibriumState eq2{2.0, 0.5};
    const double kappa = 1.3;
    const double expected = 2.0 * (kappa * std::log(kappa) - kappa + 1.0) + 0.5 * (kappa * std::log(kappa) - kappa + 1.0);
    CHECK(std::abs(entropy_H(scaled_chi(g, 2.0 * kappa, 0.5 * kappa), eq2, g) - expected) < 1e-12);

    for (std::uint64_t seed = 0; seed < 10; ++seed)
        CHECK(entropy_H(make_random_bounded_state(g, 0.5, 2.0, seed), eq, g) >= 0.0);

    auto bad = eq.state(g);
    bad.f2[3] = 0.0;
    CHECK_THROWS_AS((void)entropy_H(bad, eq, g), InvariantViolation);
}

TEST_CASE("thermal dissipation")
{
    auto g = gaussian_grid(1, 16, 32);
    auto D = dissipation_D12(cosine_state(g), g);
    CHECK(std::abs(D.D1) < 1e-15);
    CHECK(std::abs(D.D2) < 1e-15);

    auto F = make_random_bounded_state(g, 0.5, 2.0, 3);
    auto m = moments(F, g);
    const std::size_t ns = g.space_size();
    double ref[2] = {0.0, 0.0};
    for (int s = 0; s < 2; ++s)
        for (std::size_t iv = 0; iv < g.velocity_size(); ++iv)
            for (std::size_t ix = 0; ix < ns; ++ix) {
                const double f = F.f(s)[iv * ns + ix];
                const double e = m.rho(s)[ix] * g.chi(s).values[iv];
                ref[s] += g.weights()[iv] * (f - e) * std::log(f / e) * g.cell_volume();
            }
    D = dissipation_D12(F, g);
    CHECK(D.D1 > 0.0);
    CHECK(D.D1 == doctest::Approx(ref[0]).epsilon(1e-12));
    CHECK(D.D2 == doctest::Approx(ref[1]).epsilon(1e-12));

    // The integrand is homogeneous of degree one.
    auto D2x = dissipation_D12(combine(2.0, F, 0.0, F), g);
    CHECK(D2x.D1 == doctest::Approx(2.0 * D.D1).epsilon(1e-12));
    CHECK(D2x.D2 == doctest::Approx(2.0 * D.D2).epsilon(1e-12));
}

TEST_CASE("reaction dissipation")
{
    auto g = gaussian_grid(1, 16, 64);
    CHECK(std::abs(dissipation_D3(scaled_chi(g, 1.0, 1.0), g)) < 1e-15);
    CHECK(std::abs(dissipation_D3(scaled_chi(g, 2.0, 1.0), g) - std::log(2.0)) < 1e-8);
    CHECK(std::abs(dissipation_D3(EquilibriumState{2.0, 0.5}.state(g), g)) < 1e-14);

    auto small = gaussian_grid(1, 8, 8);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto F = make_random_bounded_state(small, 0.5, 2.0, seed);
        CHECK(std::abs(dissipation_D3(F, small) - naive_D3(F, small)) < 1e-12);
    }
    auto F = cosine_state(small);
    CHECK(std::abs(dissipation_D3(F, small) - naive_D3(F, small)) < 1e-12);
}

TEST_CASE("reaction residual")
{
    auto g = gaussian_grid(1, 16, 32);
    auto U = scaled_chi(g, 1.0, 1.0);
    CHECK(sup_diff(reaction_R(U, g), zero_state(g)) < 1e-15);
    auto eq = EquilibriumState{2.0, 0.5};
    CHECK(sup_diff(reaction_R(eq.state(g), g), zero_state(g)) < 1e-15);

    auto F = scaled_chi(g, 2.0, 1.0);
    auto R = reaction_R(F, g);
    CHECK(sup_diff(R, scaled_chi(g, -1.0, -1.0)) < 1e-15);
    auto eqF = equilibrium_state(F, g);
    CHECK(weighted_norm_sq(R, eqF, g) == doctest::Approx(1.0 / eqF.rho1_inf + 1.0 / eqF.rho2_inf).epsilon(1e-12));
}

TEST_CASE("operator A on a single Fourier mode")
{
    auto g = gaussian_grid(1, 64, 64);
    const double a = 0.3;
    auto AF = operator_A_apply(flux_mode(g, a, 1), g);
    const std::size_t ns = g.space_size();
    double err = 0.0, err2 = 0.0;
    for (std::size_t iv = 0; iv < g.velocity_size(); ++iv)
        for (std::size_t ix = 0; ix < ns; ++ix) {
            const double w1 = -two_pi * a * std::cos(two_pi * g.x_coord(ix, 0)) / (1.0 + two_pi * two_pi);
            err = std::max(err, std::abs(AF.f1[iv * ns + ix] - g.chi1().values[iv] * w1));
            err2 = std::max(err2, std::abs(AF.f2[iv * ns + ix]));
        }
    CHECK(err < 1e-10);
    CHECK(err2 < 1e-15);
}

TEST_CASE("operator A-star on a single Fourier mode")
{
    auto g = gaussian_grid(1, 64, 64, 4.0, 0.5);
    const double theta = g.chi1().temperature_like;
    CHECK(theta == doctest::Approx(0.5).epsilon(1e-6));
    StatePair G = zero_state(g);
    const std::size_t ns = g.space_size();
    for (std::size_t iv = 0; iv < g.velocity_size(); ++iv)
        for (std::size_t ix = 0; ix < ns; ++ix)
            G.f2[iv * ns + ix] = g.chi2().values[iv] * std::cos(two_pi * g.x_coord(ix, 0));
    auto out = operator_Astar_apply(G, g);
    double err = 0.0;
    for (std::size_t iv = 0; iv < g.velocity_size(); ++iv)
        for (std::size_t ix = 0; ix < ns; ++ix) {
            const double expect = -two_pi * std::sin(two_pi * g.x_coord(ix, 0)) / (1.0 + two_pi * two_pi * theta) *
                                  g.chi2().values[iv] * g.velocity(iv, 0);
            err = std::max(err, std::abs(out.f2[iv * ns + ix] - expect));
            err = std::max(err, std::abs(out.f1[iv * ns + ix]));
        }
    CHECK(err < 1e-12);

    // Constant density: zero gradient.
    auto C = scaled_chi(g, 0.7, 1.9);
    CHECK(sup_diff(operator_Astar_apply(C, g), zero_state(g)) < 1e-15);
}

TEST_CASE("A and A-star are adjoint")
{
    for (int d : {1, 2}) {
        auto g = d == 1 ? gaussian_grid(1, 32, 32) : gaussian_grid(2, 12, 8, 4.0);
        EquilibriumState eq{1.7, 1.0 / 1.7};
        double worst = 0.0;
        for (std::uint64_t k = 0; k < 20; ++k) {
            auto F = random_signed_state(g, 1000 + k), G = random_signed_state(g, 2000 + k);
            const double lhs = weighted_inner(operator_A_apply(F, g), G, eq, g);
            const double rhs = weighted_inner(F, operator_Astar_apply(G, g), eq, g);
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        CAPTURE(d);
        CHECK(worst <= 1e-10);
    }
}

TEST_CASE("A annihilates macroscopic states")
{
    auto g = gaussian_grid(1, 32, 32);
    auto F = cosine_state(g);
    CHECK(sup_diff(operator_A_apply(F, g), zero_state(g)) < 1e-15);
    auto eq = equilibrium_state(F, g);
    CHECK(sup_diff(operator_A_apply(eq.state(g), g), zero_state(g)) < 1e-15);
    CHECK(modified_entropy_Gamma(F, eq, g, 0.05) == doctest::Approx(entropy_H(F, eq, g)).epsilon(1e-14));
    CHECK(modified_entropy_Gamma(eq.state(g), eq, g, 0.05) == doctest::Approx(0.0));
}

TEST_CASE("A is bounded by one half")
{
    auto g = gaussian_grid(1, 32, 32);
    EquilibriumState eq{1.0, 1.0};
    for (std::uint64_t k = 0; k < 10; ++k) {
        auto F = random_signed_state(g, 77 + k);
        CHECK(weighted_norm_sq(operator_A_apply(F, g), eq, g) <= 0.25 * weighted_norm_sq(F, eq, g) + 1e-15);
    }
}

TEST_CASE("record fields agree with the individual functionals")
{
    auto g = gaussian_grid(1, 32, 32);
    InitialCondition ic = cosine_ic();
    ic.micro_amplitude = 0.2;
    ic.unchecked = true;
    auto F = make_initial_condition(ic, g, 0.5, 2.0);
    auto eq = equilibrium_state(F, g);
    auto r = compute_record(F, eq, g, 0.1);
    auto D = dissipation_D12(F, g);
    auto diff = combine(1.0, F, -1.0, eq.state(g));
    CHECK(r.H == doctest::Approx(entropy_H(F, eq, g)));
    CHECK(r.D1 == doctest::Approx(D.D1));
    CHECK(r.D3 == doctest::Approx(dissipation_D3(F, g)));
    CHECK(r.dist2 == doctest::Approx(weighted_norm_sq(diff, eq, g)));
    CHECK(r.micro2 == doctest::Approx(weighted_norm_sq(combine(1.0, F, -1.0, projection_Pi(F, g)), eq, g)));
    CHECK(r.R2 == doctest::Approx(weighted_norm_sq(reaction_R(F, g), eq, g)));
    CHECK(r.coupling == doctest::Approx(weighted_inner(operator_A_apply(diff, g), diff, eq, g)));
    CHECK(r.Gamma == doctest::Approx(r.H + 0.1 * r.coupling));
    CHECK(r.massdiff == doctest::Approx(conserved_mass_difference(F, g)));
    CHECK(std::abs(r.coupling) > 0.0);
}

TEST_CASE("inequality checks")
{
    auto g = gaussian_grid(1, 32, 32);
    auto eq = EquilibriumState{2.0, 0.5};
    auto rep = verify_inequalities(eq.state(g), eq, g);
    CHECK(rep.all_passed());
    for (const auto &c : rep.checks)
        CHECK(std::abs(c.lhs) + std::abs(c.rhs) < 1e-12);

    auto F = cosine_state(g);
    auto macro = verify_inequalities(F, equilibrium_state(F, g), g);
    CHECK(macro.all_passed());
    CHECK(std::abs(macro.at("taf_bound").lhs) < 1e-15);

    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto R = make_random_bounded_state(g, 0.5, 2.0, seed);
        auto r = verify_inequalities(R, equilibrium_state(R, g), g);
        CHECK(r.all_passed());
        CHECK(r.checks.size() == 5);
    }
    CHECK_THROWS((void)rep.at("no_such_check"));
}

TEST_CASE("decay fits on synthetic data")
{
    std::vector<DiagnosticsRecord> recs;
    for (int k = 0; k <= 100; ++k) {
        DiagnosticsRecord r;
        r.t = 0.05 * k;
        r.Gamma = std::exp(-3.0 * r.t);
        r.dist2 = 2.0 * std::exp(-2.5 * r.t);
        recs.push_back(r);
    }
    auto fit = decay_rate_fit(recs, 0.0, 5.0);
    CHECK(fit.lambda == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.lambda_dist == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(fit.points == 101);
    CHECK(decay_rate_fit_tail(recs).lambda == doctest::Approx(3.0).epsilon(1e-12));

    std::mt19937_64 rng(5);
    std::normal_distribution<double> noise(0.0, 0.01);
    for (auto &r : recs)
        r.Gamma *= 1.0 + noise(rng);
    fit = decay_rate_fit(recs, 0.0, 5.0);
    CHECK(std::abs(fit.lambda - 3.0) < 0.1);
    CHECK(fit.r_squared > 0.99);

    CHECK_THROWS_AS((void)decay_rate_fit(recs, 0.0, 0.3), ConfigError);

    for (auto &r : recs)
        r.Gamma = r.dist2 = 0.0;
    fit = decay_rate_fit(recs, 0.0, 5.0);
    CHECK(fit.at_equilibrium);
    CHECK(std::isinf(fit.lambda));
}

TEST_CASE("entropy balance on synthetic data")
{
    std::vector<DiagnosticsRecord> recs;
    for (int k = 0; k <= 50; ++k) {
        DiagnosticsRecord r;
        r.t = 0.01 * k;
        r.H = std::exp(-2.0 * r.t);
        r.D1 = 0.25 * std::exp(-2.0 * r.t);
        r.D2 = 0.25 * std::exp(-2.0 * r.t);
        r.D3 = 1.0 * std::exp(-2.0 * r.t);
        recs.push_back(r);
    }
    auto eb = entropy_balance_check(recs, 2.0, 1e-14);
    CHECK(eb.points == 49);
    CHECK(eb.max_relative_mismatch < 1e-4);
    // Without the thermal part the balance is off by a third of the rate.
    CHECK(entropy_balance_check(recs, 0.0).max_relative_mismatch > 0.9);

    for (auto &r : recs)
        r.H = r.D1 = r.D2 = r.D3 = 0.0;
    CHECK(entropy_balance_check(recs, 1.0).max_absolute_mismatch == 0.0);
}

TEST_CASE("entropy balance along a solver run")
{
    auto g = gaussian_grid(1, 32, 32);
    auto F0 = cosine_state(g);
    auto eq = equilibrium_state(F0, g);
    for (double sigma : {1.0, 0.0}) {
        std::vector<double> mismatch;
        for (double dt : {2e-3, 1e-3}) {
            SolverConfig cfg;
            cfg.dt = dt;
            cfg.t_final = 0.1;
            std::vector<DiagnosticsRecord> recs;
            (void)run(F0, ModelParams{1.0, sigma}, cfg, g,
                      [&](const StatePair &F) { recs.push_back(compute_record(F, eq, g, 0.05)); });
            mismatch.push_back(entropy_balance_check(recs, sigma).max_relative_mismatch);
        }
        CAPTURE(sigma);
        CHECK(mismatch[1] < 1e-3);
        CHECK(mismatch[0] / mismatch[1] > 3.5);
    }
}

TEST_CASE("delta sweep and monotonicity")
{
    std::vector<DiagnosticsRecord> recs;
    for (int k = 0; k <= 40; ++k) {
        DiagnosticsRecord r;
        r.t = 0.1 * k;
        r.H = std::exp(-r.t);
        r.coupling = (k % 2 ? 1.0 : -1.0) * 0.1 * std::exp(-r.t);
        r.dist2 = r.H;
        r.Gamma = r.H;
        recs.push_back(r);
    }
    CHECK(gamma_monotone(recs));
    auto rows = delta_sweep(recs, {1.0, 0.01});
    REQUIRE(rows.size() == 2);
    CHECK_FALSE(rows[0].monotone);
    CHECK(rows[0].worst_increase > 0.0);
    CHECK(rows[1].monotone);
    CHECK(rows[1].worst_increase < 0.0);
}

TEST_CASE("csv round trip")
{
    const auto path = (std::filesystem::temp_directory_path() / "grkin_test_records.csv").string();
    std::vector<DiagnosticsRecord> recs;
    {
        CsvSink sink(path);
        MemorySink mem;
        TeeSink tee(sink, mem);
        auto g = gaussian_grid(1, 16, 16);
        auto F = make_random_bounded_state(g, 0.5, 2.0, 9);
        auto eq = equilibrium_state(F, g);
        for (int k = 0; k < 3; ++k) {
            auto r = compute_record(F, eq, g, 0.05);
            r.t = 0.1 * k + 1.0 / 3.0;
            tee.write(r);
        }
        recs = mem.records;
    }
    auto back = read_records_csv(path);
    REQUIRE(back.size() == recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
        CHECK(back[i].t == recs[i].t);
        CHECK(back[i].H == recs[i].H);
        CHECK(back[i].D3 == recs[i].D3);
        CHECK(back[i].coupling == recs[i].coupling);
        CHECK(back[i].r2max == recs[i].r2max);
    }
    std::filesystem::remove(path);
}
