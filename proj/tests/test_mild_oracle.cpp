// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "grkin/error.hpp"
#include "grkin/mild_oracle.hpp"
#include "support.hpp"

using namespace grkin;
using namespace grkin::test;

TEST_CASE("simpson integrates cubics exactly")
{
    for (int n : {3, 4, 5, 8, 11}) {
        const double h = 1.0 / (n - 1);
        std::vector<double> s(n);
        for (int j = 0; j < n; ++j) {
            const double x = j * h;
            s[j] = 1.0 + 2.0 * x - x * x + 4.0 * x * x * x;
        }
        CAPTURE(n);
        CHECK(simpson(s, h) == doctest::Approx(1.0 + 1.0 - 1.0 / 3.0 + 1.0).epsilon(1e-14));
    }
}

TEST_CASE("q factor")
{
    std::vector<double> r(9, 0.5);
    CHECK(q_factor(r, 1.0, 1.0, 0.3, 0.3) == 1.0);
    const double sigma = 2.0, eps = 0.5, tau = 0.1, t = 0.4;
    CHECK(q_factor(r, sigma, eps, tau, t) ==
          doctest::Approx(std::exp((tau - t) * (sigma / (eps * eps) + 0.5))).epsilon(1e-14));
    double prev = 1.0;
    for (double tt : {0.2, 0.3, 0.5, 1.0}) {
        const double q = q_factor(r, sigma, eps, tau, tt);
        CHECK(q < prev);
        prev = q;
    }
    CHECK_THROWS_AS((void)q_factor(r, 1.0, 1.0, 0.5, 0.1), ConfigError);
}

TEST_CASE("picard solve fixes the global equilibrium")
{
    auto g = gaussian_grid(1, 16, 16);
    auto Finf = EquilibriumState{2.0, 0.5}.state(g);
    PicardConfig pc;
    pc.tolerance = 1e-13;
    auto res = picard_solve(Finf, 0.1, ModelParams{1.0, 1.0}, g, pc);
    CHECK(sup_diff(res.state, Finf) < 1e-12);
    CHECK(res.iterations <= 5);
}

TEST_CASE("space-homogeneous data match an independent ODE solve")
{
    auto g = gaussian_grid(1, 4, 16);
    std::vector<double> f1(g.velocity_size()), f2(g.velocity_size());
    for (std::size_t iv = 0; iv < f1.size(); ++iv) {
        f1[iv] = 1.4 * g.chi1().values[iv];
        f2[iv] = 0.6 * g.chi2().values[iv] * (1.0 + 0.3 * std::tanh(g.velocity(iv, 0)));
    }
    PicardConfig pc;
    pc.tolerance = 1e-13;
    pc.time_nodes = 200;
    const double t = 0.1;
    const ModelParams p{1.0, 1.0};
    auto res = picard_solve(uniform_state(g, f1, f2), t, p, g, pc);
    auto [r1, r2] = homogeneous_reference(g, f1, f2, p.sigma, p.epsilon, t, 4000);
    double err = 0.0;
    for (std::size_t iv = 0; iv < f1.size(); ++iv) {
        err = std::max(err, std::abs(res.state.f1[iv * g.space_size()] - r1[iv]));
        err = std::max(err, std::abs(res.state.f2[iv * g.space_size()] - r2[iv]));
    }
    CHECK(err < 1e-8);
    CHECK(res.residual <= 1e-13);
}

TEST_CASE("iterates contract and respect the bounds")
{
    auto g = gaussian_grid(1, 16, 16);
    auto F0 = cosine_state(g);
    PicardConfig pc;
    pc.tolerance = 1e-12;
    pc.time_nodes = 40;
    auto res = picard_solve(F0, 0.1, ModelParams{1.0, 1.0}, g, pc);
    REQUIRE(res.residual_history.size() >= 3);
    for (std::size_t k = 2; k < res.residual_history.size(); ++k)
        CHECK(res.residual_history[k] < res.residual_history[k - 1]);
    CHECK(check_bounds(res.state, 0.5, 2.0, g).passed);
    CHECK(std::abs(conserved_mass_difference(res.state, g) - conserved_mass_difference(F0, g)) < 1e-9);
}

TEST_CASE("solver discrepancy shrinks at second order")
{
    auto g = gaussian_grid(1, 16, 16);
    auto F0 = cosine_state(g);
    const ModelParams p{1.0, 1.0};
    PicardConfig pc;
    pc.tolerance = 1e-13;
    pc.time_nodes = 100;
    auto oracle = picard_solve(F0, 0.1, p, g, pc).state;
    auto solve = [&](double dt) {
        SolverConfig cfg;
        cfg.dt = dt;
        cfg.t_final = 0.1;
        cfg.cadence = 1000000;
        return run(F0, p, cfg, g).final_state;
    };
    const double e1 = sup_diff(solve(0.01), oracle);
    const double e2 = sup_diff(solve(0.005), oracle);
    CHECK(e1 < 1e-4);
    CHECK(e1 / e2 > 3.5);
}

TEST_CASE("non-convergence is reported")
{
    auto g = gaussian_grid(1, 16, 16);
    PicardConfig pc;
    pc.max_iterations = 2;
    pc.tolerance = 1e-15;
    CHECK_THROWS_AS((void)picard_solve(cosine_state(g), 0.5, ModelParams{}, g, pc), NumericalFailure);
    pc.time_nodes = 3;
    CHECK_THROWS_AS(pc.validate(), ConfigError);
}
