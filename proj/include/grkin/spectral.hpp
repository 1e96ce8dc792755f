// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace grkin {

using cplx = std::complex<double>;

/// Real-to-complex Fourier transforms on the periodic grid [0,1)^d with nx points per
/// dimension (row-major, last dimension fastest). Spectra use the half-complex layout
/// of the last dimension. Instances are immutable after construction; transforms may
/// be called concurrently.
class TorusSpectral {
public:
    TorusSpectral(int dim, int nx);
    ~TorusSpectral();
    TorusSpectral(const TorusSpectral &) = delete;
    TorusSpectral &operator=(const TorusSpectral &) = delete;

    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] int nx() const noexcept { return nx_; }
    [[nodiscard]] std::size_t space_size() const noexcept { return nspace_; }
    [[nodiscard]] std::size_t spectral_size() const noexcept { return nspec_; }

    /// Signed wavenumber of spectral index s along axis a (Nyquist reported as +nx/2).
    [[nodiscard]] double wavenumber(std::size_t s, int a) const noexcept { return kvec_[s * dim_ + a]; }
    [[nodiscard]] bool is_nyquist(std::size_t s, int a) const noexcept { return nyquist_[s * dim_ + a] != 0; }

    void forward(std::span<const double> field, std::span<cplx> spectrum) const;
    /// Normalized inverse; `spectrum` is used as scratch and overwritten.
    void inverse(std::span<cplx> spectrum, std::span<double> field) const;

    /// Multiplier of a translation x -> x + shift: exp(2 pi i k.shift) per axis, with the
    /// Nyquist factor replaced by its real part so real data stays real.
    [[nodiscard]] cplx shift_factor(std::size_t s, std::span<const double> shift) const noexcept;

    /// Fills out[s] = shift_factor(s, shift) for every spectral index.
    void shift_factors(std::span<const double> shift, std::span<cplx> out) const;

    /// Symbol of d/dx_a: 2 pi i k_a, zero on the Nyquist plane (skew-adjoint, real-preserving).
    [[nodiscard]] cplx derivative_symbol(std::size_t s, int a) const noexcept;

    /// Sum_a of squared derivative symbols, i.e. the Laplacian consistent with
    /// derivative_symbol (Nyquist contributions dropped). Non-positive.
    [[nodiscard]] double consistent_laplacian_symbol(std::size_t s) const noexcept;

    /// Exact Laplacian symbol -(2 pi)^2 |k|^2 including Nyquist modes.
    [[nodiscard]] double laplacian_symbol(std::size_t s) const noexcept;

    /// f(x + shift) evaluated on the grid by trigonometric interpolation.
    void translate(std::span<const double> field, std::span<const double> shift, std::span<double> out) const;

private:
    struct Plans;
    int dim_;
    int nx_;
    std::size_t nspace_;
    std::size_t nspec_;
    std::vector<double> kvec_;
    std::vector<unsigned char> nyquist_;
    std::unique_ptr<Plans> plans_;
};

} // namespace grkin
