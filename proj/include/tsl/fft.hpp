#pragma once

// Spectral transforms for Field2D. Plain iterative radix-2 FFT for
// power-of-two lengths, Bluestein's chirp-z algorithm for the rest, so any
// even grid size is supported. Normalization is unitary: the forward/inverse
// pair is an exact round trip and Parseval holds with the dx*dy measure.
// Spectra are returned in centered order: zero frequency sits at sample
// (nx/2, ny/2) and the angular frequency of centered sample i along x is
// kappa = 2*pi*(i - nx/2)/lx.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "tsl/grid.hpp"

namespace tsl {

namespace detail {

inline bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

inline int next_pow2(int n) {
    int m = 1;
    while (m < n) m <<= 1;
    return m;
}

// In-place unnormalized radix-2 transform, length must be a power of two.
// sign = -1 forward, +1 inverse (no 1/n factor applied).
inline void pow2_transform(std::vector<Complex>& a, int sign) {
    const int n = static_cast<int>(a.size());
    // bit-reversal permutation
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (int len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / len;
        const Complex wl(std::cos(ang), std::sin(ang));
        for (int i = 0; i < n; i += len) {
            Complex w(1.0, 0.0);
            for (int j = 0; j < len / 2; ++j) {
                Complex u = a[i + j];
                Complex v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

// One-dimensional unnormalized DFT plan of fixed length and sign.
class Dft1D {
public:
    Dft1D(int n, int sign) : n_(n), sign_(sign) {
        if (is_pow2(n_)) return;
        // Bluestein setup: chirp c_k = exp(sign*i*pi*k^2/n), convolution
        // kernel b_k = conj(c_k) extended symmetrically, both fixed per plan.
        m_ = next_pow2(2 * n_ - 1);
        chirp_.resize(n_);
        for (int k = 0; k < n_; ++k) {
            // k^2 mod 2n keeps the phase argument small and exact
            const long long k2 = (static_cast<long long>(k) * k) % (2LL * n_);
            const double ang = sign_ * std::numbers::pi * static_cast<double>(k2) / n_;
            chirp_[k] = Complex(std::cos(ang), std::sin(ang));
        }
        kernel_fft_.assign(m_, Complex{0.0, 0.0});
        for (int k = 0; k < n_; ++k) {
            const Complex b = std::conj(chirp_[k]);
            kernel_fft_[k] = b;
            if (k > 0) kernel_fft_[m_ - k] = b;
        }
        pow2_transform(kernel_fft_, -1);
    }

    void execute(std::vector<Complex>& a) const {
        if (is_pow2(n_)) {
            pow2_transform(a, sign_);
            return;
        }
        std::vector<Complex> work(m_, Complex{0.0, 0.0});
        for (int k = 0; k < n_; ++k) work[k] = a[k] * chirp_[k];
        pow2_transform(work, -1);
        for (int k = 0; k < m_; ++k) work[k] *= kernel_fft_[k];
        pow2_transform(work, +1);
        const double inv_m = 1.0 / m_;
        for (int k = 0; k < n_; ++k) a[k] = work[k] * inv_m * chirp_[k];
    }

private:
    int n_;
    int sign_;
    int m_ = 0;
    std::vector<Complex> chirp_;
    std::vector<Complex> kernel_fft_;
};

// Unnormalized 2D DFT over rows then columns.
inline void dft2(Field2D& f, int sign) {
    const int nx = f.grid.nx;
    const int ny = f.grid.ny;
    const Dft1D row_plan(nx, sign);
    const Dft1D col_plan(ny, sign);
    std::vector<Complex> line;
    line.reserve(std::max(nx, ny));
    for (int j = 0; j < ny; ++j) {
        line.assign(f.values.begin() + f.grid.index(0, j),
                    f.values.begin() + f.grid.index(0, j) + nx);
        row_plan.execute(line);
        std::copy(line.begin(), line.end(), f.values.begin() + f.grid.index(0, j));
    }
    for (int i = 0; i < nx; ++i) {
        line.resize(ny);
        for (int j = 0; j < ny; ++j) line[j] = f.values[f.grid.index(i, j)];
        col_plan.execute(line);
        for (int j = 0; j < ny; ++j) f.values[f.grid.index(i, j)] = line[j];
    }
}

// Standard DFT order -> centered order (DC moves to (nx/2, ny/2)).
inline Field2D center_spectrum(const Field2D& s) {
    Field2D out(s.grid);
    const int nx = s.grid.nx, ny = s.grid.ny;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            out.values[out.grid.index((i + nx / 2) % nx, (j + ny / 2) % ny)] =
                s.values[s.grid.index(i, j)];
    return out;
}

inline Field2D uncenter_spectrum(const Field2D& s) {
    Field2D out(s.grid);
    const int nx = s.grid.nx, ny = s.grid.ny;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            out.values[out.grid.index(i, j)] =
                s.values[s.grid.index((i + nx / 2) % nx, (j + ny / 2) % ny)];
    return out;
}

} // namespace detail

/// Angular spatial frequency of centered spectral sample i (x axis).
inline double kappa_x(const TransverseGrid& g, int i) {
    return 2.0 * std::numbers::pi * (i - g.nx / 2) / g.lx;
}

/// Angular spatial frequency of centered spectral sample j (y axis).
inline double kappa_y(const TransverseGrid& g, int j) {
    return 2.0 * std::numbers::pi * (j - g.ny / 2) / g.ly;
}

/// Unitary forward transform; result is in centered spectral order.
inline Field2D transverse_spectrum(const Field2D& field) {
    require_finite(field, "transverse_spectrum");
    Field2D work = field;
    detail::dft2(work, -1);
    const double scale = 1.0 / std::sqrt(static_cast<double>(field.grid.size()));
    for (Complex& v : work.values) v *= scale;
    return detail::center_spectrum(work);
}

/// Unitary inverse transform of a centered spectrum.
inline Field2D inverse_spectrum(const Field2D& spectrum) {
    require_finite(spectrum, "inverse_spectrum");
    Field2D work = detail::uncenter_spectrum(spectrum);
    detail::dft2(work, +1);
    const double scale = 1.0 / std::sqrt(static_cast<double>(spectrum.grid.size()));
    for (Complex& v : work.values) v *= scale;
    return work;
}

} // namespace tsl
