// SPDX-License-Identifier: Apache-2.0

#include "grkin/spectral.hpp"

#include "grkin/error.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

namespace grkin {

namespace {

// FFTW planning is not thread-safe.
std::mutex &planner_mutex()
{
    static std::mutex m;
    return m;
}

fftw_complex *as_fftw(cplx *p) { return reinterpret_cast<fftw_complex *>(p); }

} // namespace

struct TorusSpectral::Plans {
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;

    ~Plans()
    {
        std::lock_guard lock(planner_mutex());
        for (auto p : {r2c, c2r})
            if (p)
                fftw_destroy_plan(p);
    }
};

TorusSpectral::TorusSpectral(int dim, int nx)
    : dim_(dim), nx_(nx), plans_(std::make_unique<Plans>())
{
    if (dim < 1 || dim > 3)
        throw ConfigError("spatial dimension must be 1, 2 or 3");
    if (nx < 2)
        throw ConfigError("nx must be at least 2");

    const auto n = static_cast<std::size_t>(nx);
    const std::size_t nlast = n / 2 + 1;
    nspace_ = 1;
    nspec_ = nlast;
    for (int a = 0; a < dim; ++a)
        nspace_ *= n;
    for (int a = 0; a + 1 < dim; ++a)
        nspec_ *= n;

    kvec_.resize(nspec_ * dim);
    nyquist_.assign(nspec_ * dim, 0);
    for (std::size_t s = 0; s < nspec_; ++s) {
        std::size_t rem = s;
        for (int a = dim - 1; a >= 0; --a) {
            const std::size_t extent = (a == dim - 1) ? nlast : n;
            const std::size_t j = rem % extent;
            rem /= extent;
            long k = static_cast<long>(j);
            if (a != dim - 1 && 2 * j > n)
                k -= static_cast<long>(n);
            kvec_[s * dim + a] = static_cast<double>(k);
            nyquist_[s * dim + a] = (n % 2 == 0 && 2 * j == n) ? 1 : 0;
        }
    }

    std::vector<int> dims(static_cast<std::size_t>(dim), nx);
    std::vector<double> rbuf(nspace_);
    std::vector<cplx> cbuf(nspec_);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;

    std::lock_guard lock(planner_mutex());
    plans_->r2c = fftw_plan_dft_r2c(dim, dims.data(), rbuf.data(), as_fftw(cbuf.data()), flags);
    plans_->c2r = fftw_plan_dft_c2r(dim, dims.data(), as_fftw(cbuf.data()), rbuf.data(), flags);
    if (!plans_->r2c || !plans_->c2r)
        throw NumericalFailure("FFTW planning failed");
}

TorusSpectral::~TorusSpectral() = default;

void TorusSpectral::forward(std::span<const double> field, std::span<cplx> spectrum) const
{
    // FFTW's r2c does not modify its input.
    fftw_execute_dft_r2c(plans_->r2c, const_cast<double *>(field.data()), as_fftw(spectrum.data()));
}

void TorusSpectral::inverse(std::span<cplx> spectrum, std::span<double> field) const
{
    fftw_execute_dft_c2r(plans_->c2r, as_fftw(spectrum.data()), field.data());
    const double scale = 1.0 / static_cast<double>(nspace_);
    for (std::size_t i = 0; i < nspace_; ++i)
        field[i] *= scale;
}

cplx TorusSpectral::shift_factor(std::size_t s, std::span<const double> shift) const noexcept
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    cplx factor{1.0, 0.0};
    for (int a = 0; a < dim_; ++a) {
        const double phase = two_pi * wavenumber(s, a) * shift[a];
        if (is_nyquist(s, a))
            factor *= std::cos(phase);
        else
            factor *= cplx{std::cos(phase), std::sin(phase)};
    }
    return factor;
}

void TorusSpectral::shift_factors(std::span<const double> shift, std::span<cplx> out) const
{
    for (std::size_t s = 0; s < nspec_; ++s)
        out[s] = shift_factor(s, shift);
}

cplx TorusSpectral::derivative_symbol(std::size_t s, int a) const noexcept
{
    if (is_nyquist(s, a))
        return {0.0, 0.0};
    return {0.0, 2.0 * std::numbers::pi * wavenumber(s, a)};
}

double TorusSpectral::consistent_laplacian_symbol(std::size_t s) const noexcept
{
    double sum = 0.0;
    for (int a = 0; a < dim_; ++a) {
        if (is_nyquist(s, a))
            continue;
        const double k = 2.0 * std::numbers::pi * wavenumber(s, a);
        sum -= k * k;
    }
    return sum;
}

double TorusSpectral::laplacian_symbol(std::size_t s) const noexcept
{
    double sum = 0.0;
    for (int a = 0; a < dim_; ++a) {
        const double k = 2.0 * std::numbers::pi * wavenumber(s, a);
        sum -= k * k;
    }
    return sum;
}

void TorusSpectral::translate(std::span<const double> field, std::span<const double> shift,
                              std::span<double> out) const
{
    std::vector<cplx> spec(nspec_);
    forward(field, spec);
    for (std::size_t s = 0; s < nspec_; ++s)
        spec[s] *= shift_factor(s, shift);
    inverse(spec, out);
}

} // namespace grkin
