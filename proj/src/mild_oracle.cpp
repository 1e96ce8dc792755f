// SPDX-License-Identifier: Apache-2.0

#include "grkin/mild_oracle.hpp"

#include "grkin/error.hpp"
#include "grkin/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace grkin {

void PicardConfig::validate() const
{
    if (max_iterations < 1)
        throw ConfigError("Picard max_iterations must be at least 1");
    if (!(tolerance > 0.0))
        throw ConfigError("Picard tolerance must be positive");
    if (time_nodes < 8)
        throw ConfigError("Picard time_nodes must be at least 8");
}

double simpson(std::span<const double> samples, double h)
{
    const std::size_t count = samples.size();
    if (count < 2)
        return 0.0;
    if (count == 2)
        return 0.5 * h * (samples[0] + samples[1]);
    const std::size_t intervals = count - 1;
    std::size_t simpson_end = intervals % 2 == 0 ? intervals : intervals - 3;
    double sum = 0.0;
    if (simpson_end > 0) {
        double odd = 0.0, even = 0.0;
        for (std::size_t j = 1; j < simpson_end; ++j)
            (j % 2 ? odd : even) += samples[j];
        sum = h / 3.0 * (samples[0] + 4.0 * odd + 2.0 * even + samples[simpson_end]);
    }
    if (simpson_end != intervals) {
        const std::size_t j = simpson_end;
        sum += 3.0 * h / 8.0 * (samples[j] + 3.0 * samples[j + 1] + 3.0 * samples[j + 2] + samples[j + 3]);
    }
    return sum;
}

double q_factor(std::span<const double> rho_samples, double sigma, double epsilon, double tau, double t)
{
    if (tau > t)
        throw ConfigError("q_factor requires tau <= t");
    if (tau == t)
        return 1.0;
    if (rho_samples.size() < 2)
        throw ConfigError("q_factor needs at least two samples on [tau, t]");
    const double h = (t - tau) / static_cast<double>(rho_samples.size() - 1);
    return std::exp(sigma * (tau - t) / (epsilon * epsilon) - simpson(rho_samples, h));
}

namespace {

// Integral of the sampled function over [s_j, s_{j+1}] from a local cubic (quadratic or
// linear on the shortest histories), nodes 0..n.
double interval_integral(const double *r, std::size_t j, std::size_t n, double h)
{
    if (n == 1)
        return 0.5 * h * (r[0] + r[1]);
    if (n == 2)
        return j == 0 ? h * (5.0 * r[0] + 8.0 * r[1] - r[2]) / 12.0 : h * (-r[0] + 8.0 * r[1] + 5.0 * r[2]) / 12.0;
    if (j == 0)
        return h * (9.0 * r[0] + 19.0 * r[1] - 5.0 * r[2] + r[3]) / 24.0;
    if (j == n - 1)
        return h * (r[n - 3] - 5.0 * r[n - 2] + 19.0 * r[n - 1] + 9.0 * r[n]) / 24.0;
    return h * (-r[j - 1] + 13.0 * r[j] + 13.0 * r[j + 1] - r[j + 2]) / 24.0;
}

} // namespace

PicardResult picard_solve(const StatePair &F0, double t, const ModelParams &params, const PhaseGrid &grid,
                          const PicardConfig &config)
{
    params.validate();
    config.validate();
    if (!(t > 0.0))
        throw ConfigError("Picard horizon must be positive");
    if (F0.f1.size() != grid.size() || F0.f2.size() != grid.size())
        throw ConfigError("initial state shape does not match the phase grid");

    const auto &sp = grid.spectral();
    const std::size_t ns = grid.space_size();
    const std::size_t nk = sp.spectral_size();
    const std::size_t nv = grid.velocity_size();
    const std::size_t N = static_cast<std::size_t>(config.time_nodes);
    const double h = t / static_cast<double>(N);
    const double a = params.relaxation_rate();
    const double eps = params.epsilon;
    const int d = grid.dim();
    const auto &w = grid.weights();

    // Density history rho[s][n * ns + ix], frozen at the initial moments to start.
    const auto m0 = moments(F0, grid);
    std::array<std::vector<double>, 2> rho;
    for (int s = 0; s < 2; ++s) {
        rho[s].resize((N + 1) * ns);
        for (std::size_t n = 0; n <= N; ++n)
            std::copy(m0.rho(s).begin(), m0.rho(s).end(), rho[s].begin() + static_cast<std::ptrdiff_t>(n * ns));
    }

    std::array<std::vector<cplx>, 2> f0_spec;
    for (int s = 0; s < 2; ++s) {
        f0_spec[s].resize(nv * nk);
        for (std::size_t iv = 0; iv < nv; ++iv)
            sp.forward(std::span<const double>(F0.f(s).data() + iv * ns, ns),
                       std::span<cplx>(f0_spec[s].data() + iv * nk, nk));
    }

    PicardResult result;
    result.state = zero_state(grid);
    result.state.time = F0.time + t;

    // contrib[s][iv][n * ns + ix] = w_v f_s(x, v, t_n)
    std::array<std::vector<double>, 2> contrib{std::vector<double>(nv * (N + 1) * ns),
                                               std::vector<double>(nv * (N + 1) * ns)};
    std::array<std::vector<cplx>, 2> rho_spec{std::vector<cplx>((N + 1) * nk), std::vector<cplx>((N + 1) * nk)};

    for (int iter = 1; iter <= config.max_iterations; ++iter) {
        for (int s = 0; s < 2; ++s)
            for (std::size_t n = 0; n <= N; ++n)
                sp.forward(std::span<const double>(rho[s].data() + n * ns, ns),
                           std::span<cplx>(rho_spec[s].data() + n * nk, nk));

        parallel_for(nv, [&](std::size_t iv) {
            // lag_factor[L] translates by -v L h / eps.
            std::vector<cplx> lag_factor((N + 1) * nk);
            std::array<double, 3> shift{};
            for (std::size_t L = 0; L <= N; ++L) {
                for (int ax = 0; ax < d; ++ax)
                    shift[ax] = -grid.velocity(iv, ax) * static_cast<double>(L) * h / eps;
                sp.shift_factors(std::span<const double>(shift.data(), static_cast<std::size_t>(d)),
                                 std::span<cplx>(lag_factor.data() + L * nk, nk));
            }

            std::vector<cplx> scratch(nk);
            // Along-characteristic samples R[s][m * ns + ix] = rho_s(x - v (t_n - t_m)/eps, t_m).
            std::array<std::vector<double>, 2> R{std::vector<double>((N + 1) * ns), std::vector<double>((N + 1) * ns)};
            std::array<std::vector<double>, 2> foot{std::vector<double>(ns), std::vector<double>(ns)};
            std::vector<double> series(N + 1), cum(N + 1), integrand(N + 1);
            const double chi[2] = {grid.chi1().values[iv], grid.chi2().values[iv]};

            for (int s = 0; s < 2; ++s)
                for (std::size_t ix = 0; ix < ns; ++ix)
                    contrib[s][iv * (N + 1) * ns + ix] = w[iv] * F0.f(s)[iv * ns + ix];

            for (std::size_t n = 1; n <= N; ++n) {
                for (int s = 0; s < 2; ++s) {
                    for (std::size_t m = 0; m <= n; ++m) {
                        const cplx *src = rho_spec[s].data() + m * nk;
                        const cplx *fac = lag_factor.data() + (n - m) * nk;
                        for (std::size_t k = 0; k < nk; ++k)
                            scratch[k] = src[k] * fac[k];
                        sp.inverse(scratch, std::span<double>(R[s].data() + m * ns, ns));
                    }
                    const cplx *src = f0_spec[s].data() + iv * nk;
                    const cplx *fac = lag_factor.data() + n * nk;
                    for (std::size_t k = 0; k < nk; ++k)
                        scratch[k] = src[k] * fac[k];
                    sp.inverse(scratch, foot[s]);
                }

                for (std::size_t ix = 0; ix < ns; ++ix) {
                    for (int s = 0; s < 2; ++s) {
                        const int other = 1 - s;
                        // Cumulative int_{t_m}^{t_n} rho_other along the characteristic.
                        for (std::size_t m = 0; m <= n; ++m)
                            series[m] = R[other][m * ns + ix];
                        cum[n] = 0.0;
                        for (std::size_t m = n; m-- > 0;)
                            cum[m] = cum[m + 1] + interval_integral(series.data(), m, n, h);
                        for (std::size_t m = 0; m <= n; ++m) {
                            const double q = std::exp(a * (static_cast<double>(m) - static_cast<double>(n)) * h - cum[m]);
                            integrand[m] = q * (1.0 + a * R[s][m * ns + ix]);
                        }
                        const double q0 = std::exp(-a * static_cast<double>(n) * h - cum[0]);
                        const double value =
                            q0 * foot[s][ix] + chi[s] * simpson(std::span<const double>(integrand.data(), n + 1), h);
                        contrib[s][iv * (N + 1) * ns + n * ns + ix] = w[iv] * value;
                        if (n == N)
                            result.state.f(s)[iv * ns + ix] = value;
                    }
                }
            }
        });

        double residual = 0.0;
        for (int s = 0; s < 2; ++s) {
            for (std::size_t n = 1; n <= N; ++n) {
                for (std::size_t ix = 0; ix < ns; ++ix) {
                    double sum = 0.0;
                    for (std::size_t iv = 0; iv < nv; ++iv)
                        sum += contrib[s][iv * (N + 1) * ns + n * ns + ix];
                    double &old = rho[s][n * ns + ix];
                    residual = std::max(residual, std::abs(sum - old));
                    old = sum;
                }
            }
        }
        if (!std::isfinite(residual))
            throw NumericalFailure("Picard iteration produced non-finite densities");
        result.iterations = iter;
        result.residual = residual;
        result.residual_history.push_back(residual);
        if (residual <= config.tolerance)
            return result;
    }
    std::ostringstream msg;
    msg << "Picard iteration did not converge in " << config.max_iterations << " iterations (last residual "
        << result.residual << ")";
    throw NumericalFailure(msg.str());
}

} // namespace grkin
