#pragma once

// Quadratic Weyl sums on the torus,
//   f(x,y) = sum_{j=1}^{M} e(jx + j^2 y),   e(t) = exp(2*pi*i*t),
// at scale delta = M^{-2}, and their L^p moments.
//
// For fixed y the sum is a degree-M trigonometric polynomial in x, so a full
// row of grid values comes from one unscaled inverse FFT of the coefficient
// vector c_j = e(j^2 y).  Moments are equal-weight Riemann sums over the
// equispaced grid X = ox*(2M+1) by Y = oy*(2M^2+1).  |f|^p with p = 2k even
// is itself a trigonometric polynomial of degree (k(M-1), k(M^2-1)), so the
// Riemann sum is exact as soon as the grid exceeds that bandwidth; the
// helper grid_is_exact_for
// reports this.  Grid phases j^2*y are reduced modulo one period in integer
// arithmetic before any trigonometry.
//
// Everything here is deterministic: rows are cut into fixed blocks, blocks
// may run on any number of threads, and partial sums are folded in block
// order through compensated accumulators.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <vector>

#include "decoupling/errors.hpp"
#include "decoupling/fft.hpp"
#include "decoupling/rational.hpp"
#include "decoupling/summation.hpp"

namespace decoupling {

struct WeylSumSpec {
    int M = 1;  // delta = M^{-2}

    static WeylSumSpec make(int M) {
        if (M < 1) throw invalid_spec_error("Weyl sum needs M >= 1");
        return WeylSumSpec{M};
    }
    double delta() const { return 1.0 / (static_cast<double>(M) * M); }
};

struct GridSpec {
    int ox = 4;
    int oy = 4;
    std::int64_t max_nodes = std::int64_t(1) << 33;

    void validate() const {
        if (ox < 2 || oy < 2) throw invalid_spec_error("oversampling factors must be >= 2");
    }
    int nx(int M) const { return ox * (2 * M + 1); }
    int ny(int M) const { return oy * (2 * M * M + 1); }
    GridSpec doubled() const { return GridSpec{2 * ox, 2 * oy, max_nodes}; }
};

struct MomentSample {
    int M = 0;
    Lp p = Lp::inf();
    double value = 0.0;
    double err_estimate = 0.0;
};

struct SpProfile {
    int M = 0;
    Lp p = Lp::inf();
    std::vector<double> xd;      // equispaced nodes of [-1, 1)
    std::vector<double> values;  // S_p at each node

    // (2/G) * sum S_p(x_i)^k, the Riemann sum of S_p^k over [-1, 1].
    double integral_of_power(int k) const {
        NeumaierSum s;
        for (double v : values) {
            double t = v;
            for (int i = 1; i < k; ++i) t *= v;
            s.add(t);
        }
        return 2.0 * s.value() / static_cast<double>(values.size());
    }
};

namespace detail {

// |z|^p for p in [2, inf); even integer p avoids pow().
struct PowAbs {
    explicit PowAbs(const Lp& p) {
        double pv = p.value();
        if (!p.is_inf() && p.rational().is_integer() &&
            p.rational().num() % 2 == 0) {
            k = static_cast<int>(p.rational().num() / 2);
        }
        half_p = pv / 2.0;
    }
    double operator()(const std::complex<double>& z) const {
        double n = std::norm(z);
        if (k > 0) {
            double r = n;
            for (int i = 1; i < k; ++i) r *= n;
            return r;
        }
        return std::pow(n, half_p);
    }
    int k = 0;
    double half_p = 0.0;
};

// Evaluates t -> sum_{j=1}^{M} coef[j-1] e(j t) on X nodes t = a/X.
class TrigPolyRow {
public:
    TrigPolyRow(int M, int X) : M_(M), X_(X), fft_(static_cast<std::size_t>(X)) {
        if (X <= M) throw invalid_spec_error("row grid must exceed polynomial degree");
        buf_.resize(static_cast<std::size_t>(X));
    }

    const std::complex<double>* eval(const std::complex<double>* coef) {
        std::fill(buf_.begin(), buf_.end(), std::complex<double>{0.0, 0.0});
        for (int j = 1; j <= M_; ++j) buf_[static_cast<std::size_t>(j)] = coef[j - 1];
        fft_.inverse(buf_.data(), ws_);
        return buf_.data();
    }

    int size() const { return X_; }

private:
    int M_, X_;
    Fft fft_;
    Fft::Workspace ws_;
    std::vector<std::complex<double>> buf_;
};

// coef[j-1] = e(j^2 * num/den) with the phase reduced mod den in integers.
inline void weyl_row_coefficients(int M, std::int64_t num, std::int64_t den,
                                  std::complex<double>* coef) {
    for (int j = 1; j <= M; ++j) {
        std::int64_t r = (static_cast<std::int64_t>(j) * j % den) * (num % den) % den;
        if (r < 0) r += den;
        double ang = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(den);
        coef[j - 1] = {std::cos(ang), std::sin(ang)};
    }
}

constexpr int kRowBlock = 32;

} // namespace detail

struct WeylGrid {
    int X = 0, Y = 0;
    std::vector<std::complex<double>> values;  // row-major in y

    const std::complex<double>& at(int a, int b) const {
        return values[static_cast<std::size_t>(b) * X + a];
    }
};

// Full grid of f values; materializes X*Y complex numbers, so it is guarded
// by a separate budget from the streaming moment evaluators.
inline WeylGrid eval_weyl_grid(const WeylSumSpec& spec, const GridSpec& grid,
                               std::int64_t materialize_budget = std::int64_t(1) << 24) {
    grid.validate();
    const int M = spec.M;
    const int X = grid.nx(M), Y = grid.ny(M);
    const std::int64_t nodes = static_cast<std::int64_t>(X) * Y;
    if (nodes > materialize_budget || nodes > grid.max_nodes)
        throw resource_error("grid of " + std::to_string(nodes) +
                             " nodes exceeds the materialization budget");

    WeylGrid out;
    out.X = X;
    out.Y = Y;
    out.values.resize(static_cast<std::size_t>(nodes));

    const std::int64_t blocks = (Y + detail::kRowBlock - 1) / detail::kRowBlock;
    map_blocks<int>(blocks, [&](std::int64_t blk) {
        detail::TrigPolyRow row(M, X);
        std::vector<std::complex<double>> coef(static_cast<std::size_t>(M));
        int b0 = static_cast<int>(blk) * detail::kRowBlock;
        int b1 = std::min(Y, b0 + detail::kRowBlock);
        for (int b = b0; b < b1; ++b) {
            detail::weyl_row_coefficients(M, b, Y, coef.data());
            const std::complex<double>* v = row.eval(coef.data());
            std::copy(v, v + X, out.values.begin() + static_cast<std::size_t>(b) * X);
        }
        return 0;
    });
    return out;
}

namespace detail {

// One pass of the moment quadrature.  Rows b and Y-b carry the same row sum
// because f(x,-y) = conj(f(-x,y)) maps the row onto a reversed conjugate of
// itself, so only rows 0..Y/2 are evaluated, with weight 2 on interior rows.
inline double moment_2d_value(const WeylSumSpec& spec, const Lp& p, const GridSpec& grid) {
    const int M = spec.M;
    const int X = grid.nx(M), Y = grid.ny(M);
    if (static_cast<std::int64_t>(X) * Y > grid.max_nodes)
        throw resource_error("moment grid exceeds node budget");

    const int half = Y / 2;  // rows 0..half inclusive
    const std::int64_t blocks =
        (static_cast<std::int64_t>(half) + 1 + kRowBlock - 1) / kRowBlock;
    const PowAbs pw(p);
    const bool want_max = p.is_inf();

    std::vector<double> partial = map_blocks<double>(blocks, [&](std::int64_t blk) {
        TrigPolyRow row(M, X);
        std::vector<std::complex<double>> coef(static_cast<std::size_t>(M));
        int b0 = static_cast<int>(blk) * kRowBlock;
        int b1 = std::min(half + 1, b0 + kRowBlock);
        NeumaierSum acc;
        double mx = 0.0;
        for (int b = b0; b < b1; ++b) {
            weyl_row_coefficients(M, b, Y, coef.data());
            const std::complex<double>* v = row.eval(coef.data());
            if (want_max) {
                for (int a = 0; a < X; ++a) mx = std::max(mx, std::norm(v[a]));
            } else {
                NeumaierSum rs;
                for (int a = 0; a < X; ++a) rs.add(pw(v[a]));
                double w = (b == 0 || 2 * b == Y) ? 1.0 : 2.0;
                acc.add(w * rs.value());
            }
        }
        return want_max ? mx : acc.value();
    });

    if (want_max) {
        double mx = 0.0;
        for (double v : partial) mx = std::max(mx, v);
        return std::sqrt(mx);
    }
    double total = sum_ordered(partial);
    double mean = total / (static_cast<double>(X) * static_cast<double>(Y));
    return std::pow(mean, 1.0 / p.value());
}

} // namespace detail

// L^p norm of f over the torus (probability-normalized Riemann sum); +inf
// takes the grid maximum.  err_estimate, when requested, is the change under
// doubling both oversampling factors.
inline MomentSample moment_2d(const WeylSumSpec& spec, const Lp& p, const GridSpec& grid,
                              bool with_error = false) {
    grid.validate();
    if (!p.is_inf() && p.rational() < Rational(2))
        throw invalid_spec_error("moments need p >= 2");

    MomentSample out;
    out.M = spec.M;
    out.p = p;
    out.value = detail::moment_2d_value(spec, p, grid);
    if (with_error)
        out.err_estimate = std::abs(out.value - detail::moment_2d_value(spec, p, grid.doubled()));
    return out;
}

// True when |f|^p is bandlimited strictly below the grid, making the
// equal-weight Riemann sum exact up to roundoff.
inline bool grid_is_exact_for(const WeylSumSpec& spec, const GridSpec& grid, const Lp& p) {
    if (p.is_inf() || !p.rational().is_integer() || p.rational().num() % 2 != 0) return false;
    std::int64_t k = p.rational().num() / 2;
    std::int64_t M = spec.M;
    return grid.nx(spec.M) > k * (M - 1) && grid.ny(spec.M) > k * (M * M - 1);
}

inline std::int64_t second_moment_exact(int M) {
    if (M < 1) throw invalid_spec_error("M >= 1 required");
    return M;  // orthogonality of the M characters
}

// #{1 <= j1,j2,j3,j4 <= M : j1+j2 = j3+j4, j1^2+j2^2 = j3^2+j4^2} by
// exhaustive enumeration; equals the exact fourth moment of f.
inline std::int64_t fourth_moment_count(int M, int cap = 64) {
    if (M < 1) throw invalid_spec_error("M >= 1 required");
    if (M > cap) throw resource_error("fourth_moment_count: M exceeds enumeration cap");
    std::int64_t count = 0;
    for (int j1 = 1; j1 <= M; ++j1)
        for (int j2 = 1; j2 <= M; ++j2)
            for (int j3 = 1; j3 <= M; ++j3)
                for (int j4 = 1; j4 <= M; ++j4)
                    if (j1 + j2 == j3 + j4 &&
                        j1 * j1 + j2 * j2 == j3 * j3 + j4 * j4)
                        ++count;
    return count;
}

// S_p(x_d) = integral over t in [-1,1] of |sum_j e(j t + j^2 x_d)|^p, on an
// equispaced x_d grid covering [-1, 1); the integrand has period 1 in t, so
// each node costs one row evaluation with X = ox*(2M+1) nodes.
inline SpProfile sp_profile(const WeylSumSpec& spec, const Lp& p, int xd_grid_size,
                            int ox = 4, std::int64_t max_nodes = std::int64_t(1) << 33) {
    if (!p.is_inf() && p.rational() < Rational(2))
        throw invalid_spec_error("S_p profile needs p >= 2");
    if (p.is_inf()) throw invalid_spec_error("S_p profile needs finite p");
    const int M = spec.M;
    if (xd_grid_size < 2 * M * M + 1)
        throw invalid_spec_error("x_d grid must resolve the bandwidth 2M^2+1");
    if (ox < 2) throw invalid_spec_error("oversampling must be >= 2");

    const int G = xd_grid_size;
    const int X = ox * (2 * M + 1);
    if (static_cast<std::int64_t>(G) * X > max_nodes)
        throw resource_error("S_p profile exceeds node budget");

    SpProfile prof;
    prof.M = M;
    prof.p = p;
    prof.xd.resize(static_cast<std::size_t>(G));
    prof.values.resize(static_cast<std::size_t>(G));
    for (int i = 0; i < G; ++i)
        prof.xd[static_cast<std::size_t>(i)] =
            static_cast<double>(2 * i - G) / static_cast<double>(G);

    const detail::PowAbs pw(p);
    const std::int64_t blocks = (G + detail::kRowBlock - 1) / detail::kRowBlock;
    map_blocks<int>(blocks, [&](std::int64_t blk) {
        detail::TrigPolyRow row(M, X);
        std::vector<std::complex<double>> coef(static_cast<std::size_t>(M));
        int i0 = static_cast<int>(blk) * detail::kRowBlock;
        int i1 = std::min(G, i0 + detail::kRowBlock);
        for (int i = i0; i < i1; ++i) {
            // x_d = (2i - G)/G; phases j^2 x_d reduced mod 1 in integers
            detail::weyl_row_coefficients(M, 2 * i - G, G, coef.data());
            const std::complex<double>* v = row.eval(coef.data());
            NeumaierSum rs;
            for (int a = 0; a < X; ++a) rs.add(pw(v[a]));
            prof.values[static_cast<std::size_t>(i)] = 2.0 * rs.value() / X;
        }
        return 0;
    });
    return prof;
}

// integral over z in [-1,1] of |sum_{j=1}^{M} e(jz)|^p (two periods of the
// degree-M Dirichlet-type sum).
inline double dirichlet_moment(int M, const Lp& p, int ox = 4) {
    if (M < 1) throw invalid_spec_error("M >= 1 required");
    if (p.is_inf() || p.rational() < Rational(2))
        throw invalid_spec_error("dirichlet_moment needs finite p >= 2");
    const int X = ox * (2 * M + 1);
    detail::TrigPolyRow row(M, X);
    std::vector<std::complex<double>> coef(static_cast<std::size_t>(M), {1.0, 0.0});
    const std::complex<double>* v = row.eval(coef.data());
    const detail::PowAbs pw(p);
    NeumaierSum rs;
    for (int a = 0; a < X; ++a) rs.add(pw(v[a]));
    return 2.0 * rs.value() / X;
}

// Normalized sixth moments ||f||_6^6 / M^3 for a ladder of M values; their
// growth against log M probes the logarithmic factor at the d=2 critical
// exponent.
inline std::vector<std::pair<int, double>> sixth_moment_log_check(
    const std::vector<int>& Ms, const GridSpec& grid = GridSpec{2, 2}) {
    for (std::size_t i = 1; i < Ms.size(); ++i)
        if (Ms[i] <= Ms[i - 1]) throw invalid_spec_error("M ladder must be increasing");
    std::vector<std::pair<int, double>> out;
    out.reserve(Ms.size());
    for (int M : Ms) {
        MomentSample s = moment_2d(WeylSumSpec::make(M), Lp::finite(Rational(6)), grid);
        double m3 = static_cast<double>(M) * M * M;
        double v6 = std::pow(s.value, 6.0);
        out.emplace_back(M, v6 / m3);
    }
    return out;
}

// CSV serialization for moment tables: kind,M,p_num,p_den,value,err
// (p = inf encoded as 1/0).
inline void write_moment_csv(std::ostream& os, const std::string& kind,
                             const std::vector<MomentSample>& rows) {
    os << "kind,M,p_num,p_den,value,err\n";
    char buf[64];
    for (const auto& r : rows) {
        std::int64_t pn = r.p.is_inf() ? 1 : r.p.rational().num();
        std::int64_t pd = r.p.is_inf() ? 0 : r.p.rational().den();
        os << kind << ',' << r.M << ',' << pn << ',' << pd << ',';
        std::snprintf(buf, sizeof buf, "%.17g", r.value);
        os << buf << ',';
        std::snprintf(buf, sizeof buf, "%.17g", r.err_estimate);
        os << buf << '\n';
    }
}

} // namespace decoupling
