#pragma once

// Complex FFT for arbitrary lengths.  Power-of-two lengths use an iterative
// radix-2 transform; everything else goes through Bluestein's chirp-z
// reduction to a zero-padded power-of-two convolution.  Twiddle and chirp
// phases are reduced modulo the period in integer arithmetic before any
// trigonometry, so coefficients stay accurate at every length.
//
// Conventions: forward applies e(-jk/n), inverse applies e(+jk/n) and is
// UNSCALED (no 1/n), which is the form needed to evaluate trigonometric
// polynomials on equispaced nodes.

#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

namespace decoupling {

namespace detail {

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// In-place radix-2 transform, data.size() a power of two.
// roots[k] = e(-k/n) for k < n/2; sign +1 conjugates on the fly.
// Butterflies are written in plain double arithmetic so the compiler emits
// straight-line multiply-adds instead of the checked __muldc3 runtime call.
inline void pow2_transform(std::complex<double>* data, std::size_t n,
                           const std::vector<std::complex<double>>& roots, int sign) {
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }
    const double flip = sign > 0 ? -1.0 : 1.0;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        std::size_t half = len / 2;
        std::size_t step = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const std::complex<double>& w = roots[k * step];
                double wr = w.real(), wi = flip * w.imag();
                std::complex<double>& x0 = data[i + k];
                std::complex<double>& x1 = data[i + k + half];
                double vr = x1.real() * wr - x1.imag() * wi;
                double vi = x1.real() * wi + x1.imag() * wr;
                double ur = x0.real(), ui = x0.imag();
                x0 = {ur + vr, ui + vi};
                x1 = {ur - vr, ui - vi};
            }
        }
    }
}

} // namespace detail

class Fft {
public:
    struct Workspace {
        std::vector<std::complex<double>> a;
    };

    explicit Fft(std::size_t n) : n_(n) {
        pow2_ = (n & (n - 1)) == 0 && n > 0;
        if (pow2_) {
            build_roots(roots_, n_);
            return;
        }
        pad_ = detail::next_pow2(2 * n - 1);
        build_roots(roots_, pad_);
        // chirp c_t = e(t^2 / (2n)); integer phase reduction mod 2n
        chirp_.resize(n_);
        for (std::size_t t = 0; t < n_; ++t) {
            std::uint64_t r = (static_cast<std::uint64_t>(t) * t) % (2 * n_);
            double ang = std::numbers::pi * static_cast<double>(r) / static_cast<double>(n_);
            chirp_[t] = {std::cos(ang), std::sin(ang)};
        }
        // kernel_fft_[s] holds FFT_pad of g with g_m = conj(C_m) circularly
        // embedded, where C = conj(chirp) for sign -1 (s=0) and C = chirp for
        // sign +1 (s=1).
        for (int s = 0; s < 2; ++s) {
            std::vector<std::complex<double>> g(pad_, {0.0, 0.0});
            for (std::size_t m = 0; m < n_; ++m) {
                std::complex<double> c = s == 0 ? chirp_[m] : std::conj(chirp_[m]);
                g[m] = c;
                if (m > 0) g[pad_ - m] = c;
            }
            detail::pow2_transform(g.data(), pad_, roots_, -1);
            kernel_fft_[s] = std::move(g);
        }
    }

    std::size_t size() const { return n_; }

    void forward(std::complex<double>* x, Workspace& ws) const { transform(x, -1, ws); }
    void inverse(std::complex<double>* x, Workspace& ws) const { transform(x, +1, ws); }

    // sign -1: X_a = sum_j x_j e(-aj/n); sign +1: X_a = sum_j x_j e(+aj/n).
    void transform(std::complex<double>* x, int sign, Workspace& ws) const {
        if (pow2_) {
            detail::pow2_transform(x, n_, roots_, sign);
            return;
        }
        // e(s*aj/n) = C_a C_j conj(C_{a-j}) with C_t = e(s*t^2/(2n)); chirp_
        // stores the s=+1 phases, so C = chirp for s=+1 and conj(chirp) for s=-1.
        // v = C .* (u (*) g), u_j = x_j C_j, g_m = conj(C_m).
        const int ki = sign > 0 ? 1 : 0;
        auto C = [&](std::size_t t) {
            return sign > 0 ? chirp_[t] : std::conj(chirp_[t]);
        };
        auto cmul = [](const std::complex<double>& a, const std::complex<double>& b) {
            return std::complex<double>{a.real() * b.real() - a.imag() * b.imag(),
                                        a.real() * b.imag() + a.imag() * b.real()};
        };
        ws.a.assign(pad_, {0.0, 0.0});
        for (std::size_t j = 0; j < n_; ++j) ws.a[j] = cmul(x[j], C(j));
        detail::pow2_transform(ws.a.data(), pad_, roots_, -1);
        const auto& K = kernel_fft_[ki];
        for (std::size_t m = 0; m < pad_; ++m) ws.a[m] = cmul(ws.a[m], K[m]);
        detail::pow2_transform(ws.a.data(), pad_, roots_, +1);
        double inv = 1.0 / static_cast<double>(pad_);
        for (std::size_t a = 0; a < n_; ++a) x[a] = cmul(ws.a[a] * inv, C(a));
    }

private:
    static void build_roots(std::vector<std::complex<double>>& roots, std::size_t n) {
        roots.resize(n / 2);
        for (std::size_t k = 0; k < n / 2; ++k) {
            double ang = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
            roots[k] = {std::cos(ang), std::sin(ang)};
        }
    }

    std::size_t n_;
    bool pow2_ = false;
    std::size_t pad_ = 0;
    std::vector<std::complex<double>> roots_;
    std::vector<std::complex<double>> chirp_;
    std::vector<std::complex<double>> kernel_fft_[2];
};

} // namespace decoupling
