#pragma once

// Oscillatory unit-interval integrals
//   F(a,b) = integral over xi in [0,1] of e(a xi + b xi^2),   e(t) = exp(2 pi i t),
// which are the separable factors of the extension of the constant density:
// E1(x) = prod_i F(x_i, v_i x_d).  |F| <= 1 always, F(0,0) = 1.
//
// fresnel_eval dispatches on |b|:
//   - |b| > 1/2: complete the square and use the standard Fresnel integrals
//     C, S via the Mielenz rational approximations (abs err ~1e-9);
//   - |b| <= 1/2, |a| <= 24: composite Gauss-Legendre panels;
//   - |b| <= 1/2, |a| > 24: Taylor series in b with the oscillatory moments
//     I_m = integral xi^m e(a xi) obtained from the stable upward recurrence
//     I_m = (e(a) - m I_{m-1}) / (2 pi i a).
//
// fresnel_quadrature is the independent slow path: adaptive Gauss-Legendre
// panels with at least ten nodes per oscillation of the phase, whose
// derivative is bounded by 2 pi (|a| + 2|b|).  fresnel_table materializes a
// grid of quadrature values and is guarded against configurations too coarse
// or too expensive to be useful.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "decoupling/errors.hpp"

namespace decoupling {

namespace detail {

// Fresnel cosine/sine integrals C(x) = int_0^x cos(pi t^2/2) dt and the sine
// analogue, for x >= 0 (odd extension applies).  Power series below 1.6,
// fitted auxiliary f/g expansion above; coefficients from Mielenz,
// J. Res. NIST 105 (2000).
inline void fresnel_cs(double x, double& c, double& s) {
    static const double cn[12] = {
        1.0, -0.24674011002723, 0.02818550087789, -0.00160488313564,
        5.407413381408390e-05, -1.200097255860028e-06, 1.884349911527268e-08,
        -2.202276925445466e-10, 1.989685792418021e-12, -1.430918973171519e-14,
        8.384729705118549e-17, -4.079981449233875e-19};
    static const double sn[12] = {
        0.52359877559830, -0.09228058535804, 0.00724478420420,
        -3.121169423545791e-04, 8.444272883545251e-06, -1.564714450092211e-07,
        2.108212193321454e-09, -2.157430680584343e-11, 1.733410208887483e-13,
        -1.122324478798395e-15, 5.980053239210401e-18, -2.667871362841397e-20};
    static const double fn[12] = {
        0.318309844, 9.34626e-8, -0.09676631, 0.000606222, 0.325539361,
        0.325206461, -7.450551455, 32.20380908, -78.8035274, 118.5343352,
        -102.4339798, 39.06207702};
    static const double gn[12] = {
        0.0, 0.101321519, -4.07292e-5, -0.152068115, -0.046292605, 1.622793598,
        -5.199186089, 7.477942354, -0.695291507, -15.10996796, 22.28401942,
        -10.89968491};

    double ax = std::abs(x);
    if (ax <= 1.6) {
        double x4 = ax * ax * ax * ax;
        double pc = 0.0, ps = 0.0, pw = 1.0;
        for (int n = 0; n < 12; ++n) {
            pc += cn[n] * pw;
            ps += sn[n] * pw;
            pw *= x4;
        }
        c = pc * ax;
        s = ps * ax * ax * ax;
    } else {
        double inv = 1.0 / ax, inv2 = inv * inv;
        double f = 0.0, g = 0.0, pw = inv;
        for (int n = 0; n < 12; ++n) {
            f += fn[n] * pw;
            g += gn[n] * pw;
            pw *= inv2;
        }
        double half_pi_x2 = 0.5 * std::numbers::pi * ax * ax;
        double sh = std::sin(half_pi_x2), ch = std::cos(half_pi_x2);
        c = 0.5 + f * sh - g * ch;
        s = 0.5 - f * ch - g * sh;
    }
    if (x < 0) {
        c = -c;
        s = -s;
    }
}

// E(t) = int_0^t exp(i pi u^2 / 2) du = C(t) + i S(t)
inline std::complex<double> fresnel_e(double t) {
    double c, s;
    fresnel_cs(t, c, s);
    return {c, s};
}

inline std::complex<double> unit_phase(double t) {
    double ang = 2.0 * std::numbers::pi * t;
    return {std::cos(ang), std::sin(ang)};
}

// 16-point Gauss-Legendre nodes/weights on [-1, 1] (positive half; mirror).
struct GaussLegendre16 {
    static constexpr double node[8] = {
        0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
        0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
        0.9445750230732326, 0.9894009349916499};
    static constexpr double weight[8] = {
        0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
        0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
        0.0622535239386479, 0.0271524594117541};
};

// integral of e(a xi + b xi^2) over [x0, x1] by one GL16 panel
inline std::complex<double> gl16_panel(double a, double b, double x0, double x1) {
    double h = 0.5 * (x1 - x0), m = 0.5 * (x0 + x1);
    double re = 0.0, im = 0.0;
    for (int k = 0; k < 8; ++k) {
        for (double sgn : {-1.0, 1.0}) {
            double xi = m + sgn * h * GaussLegendre16::node[k];
            double ang = 2.0 * std::numbers::pi * (a * xi + b * xi * xi);
            re += GaussLegendre16::weight[k] * std::cos(ang);
            im += GaussLegendre16::weight[k] * std::sin(ang);
        }
    }
    return {re * h, im * h};
}

} // namespace detail

// Panel-quadrature evaluation of F(a,b): composite Gauss-Legendre with node
// density tied to the oscillation count |a| + 2|b|.  Slow but independent of
// the closed-form path; this is the oracle the fast evaluator is tested
// against, and the engine behind fresnel_table.
inline std::complex<double> fresnel_quadrature(double a, double b,
                                               int nodes_per_oscillation = 10) {
    double oscillations = std::abs(a) + 2.0 * std::abs(b);
    int panels = std::max(2, static_cast<int>(
        std::ceil(oscillations * nodes_per_oscillation / 16.0)));
    std::complex<double> total{0.0, 0.0};
    for (int k = 0; k < panels; ++k) {
        double x0 = static_cast<double>(k) / panels;
        double x1 = static_cast<double>(k + 1) / panels;
        total += detail::gl16_panel(a, b, x0, x1);
    }
    return total;
}

// Fast evaluation of F(a,b); see file header for the branch structure.
inline std::complex<double> fresnel_eval(double a, double b) {
    if (b < 0.0) return std::conj(fresnel_eval(-a, -b));

    if (b <= 0.5) {
        if (std::abs(a) <= 24.0) return fresnel_quadrature(a, b, 12);
        // F = sum_k (2 pi i b)^k / k! * I_{2k},  I_m = int_0^1 xi^m e(a xi)
        const std::complex<double> ea = detail::unit_phase(a);
        const std::complex<double> inv_2pia{0.0, -1.0 / (2.0 * std::numbers::pi * a)};
        // I_m for m = 0..2K; the upward recurrence contracts for m < 2 pi |a|
        std::complex<double> I_prev = (ea - 1.0) * inv_2pia;  // I_0
        std::vector<std::complex<double>> I_even;
        I_even.push_back(I_prev);
        const int K = 34;
        for (int m = 1; m <= 2 * K; ++m) {
            I_prev = (ea - static_cast<double>(m) * I_prev) * inv_2pia;
            if (m % 2 == 0) I_even.push_back(I_prev);
        }
        std::complex<double> term{1.0, 0.0};
        std::complex<double> sum{0.0, 0.0};
        const std::complex<double> factor{0.0, 2.0 * std::numbers::pi * b};
        for (int k = 0; k <= K; ++k) {
            sum += term * I_even[static_cast<std::size_t>(k)];
            term *= factor / static_cast<double>(k + 1);
        }
        return sum;
    }

    // b > 1/2: 2 pi (a xi + b xi^2) = pi/2 u^2 + const with u = 2 sqrt(b) xi + a/sqrt(b)
    double sq = std::sqrt(b);
    double u0 = a / sq;
    double u1 = 2.0 * sq + u0;
    std::complex<double> diff = detail::fresnel_e(u1) - detail::fresnel_e(u0);
    // leading phase e(-a^2/(4b))
    std::complex<double> phase = detail::unit_phase(-a * a / (4.0 * b));
    return phase * diff / (2.0 * sq);
}

struct FresnelTable {
    double range;    // table covers [-range, range]^2
    double spacing;  // grid step in both a and b
    int n;           // nodes per axis = 2*res + 1
    std::vector<std::complex<double>> values;  // row-major in b

    const std::complex<double>& at(int ia, int ib) const {
        return values[static_cast<std::size_t>(ib) * n + ia];
    }
    double a_of(int ia) const { return -range + spacing * ia; }
    double b_of(int ib) const { return -range + spacing * ib; }
};

// Materialized table of F over [-M^2, M^2]^2 on a (2 res + 1)^2 grid, every
// entry by panel quadrature.  F varies on unit scale in both arguments, so a
// spacing above 1/2 cannot support interpolation and is rejected, as are
// configurations whose total quadrature work exceeds the budget.
inline FresnelTable fresnel_table(int M, int res,
                                  std::int64_t node_budget = std::int64_t(1) << 28) {
    if (M < 1 || res < 1) throw invalid_spec_error("fresnel_table needs M, res >= 1");
    FresnelTable t;
    t.range = static_cast<double>(M) * M;
    t.n = 2 * res + 1;
    t.spacing = t.range / res;
    if (t.spacing > 0.5)
        throw config_error("fresnel_table: spacing " + std::to_string(t.spacing) +
                           " too coarse to resolve unit-scale structure");
    // ~10 nodes per oscillation, |a| + 2|b| <= 3 range
    double per_entry = std::max(32.0, 10.0 * 3.0 * t.range);
    double total = per_entry * t.n * t.n;
    if (total > static_cast<double>(node_budget))
        throw config_error("fresnel_table: quadrature work exceeds node budget");

    t.values.resize(static_cast<std::size_t>(t.n) * t.n);
    for (int ib = 0; ib < t.n; ++ib)
        for (int ia = 0; ia < t.n; ++ia)
            t.values[static_cast<std::size_t>(ib) * t.n + ia] =
                fresnel_quadrature(t.a_of(ia), t.b_of(ib));
    return t;
}

} // namespace decoupling
