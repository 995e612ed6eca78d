#pragma once

// The box weight w_B(x) = (1 + |x - c_B| / delta^{-1})^{-100 d} adapted to
// the cube B of side delta^{-1} centered at the origin, and the norms
// ||1||_{L^p(w_B)} = (integral of w_B)^{1/p} that every unimodular piece
// contributes to a decoupling denominator.
//
// The weight is radial, so after rescaling u = x * delta the mass is
//   integral w_B = delta^{-d} * omega_{d-1} * int_0^R r^{d-1} (1+r)^{-K} dr
// with K = 100 d and R the truncation radius in box units (default 3).  The
// scaled integral does not depend on delta, so weight norms scale exactly as
// delta^{-d/p} along a ladder.  The full-space integral has the closed form
//   omega_{d-1} (d-1)! / ((K-1)(K-2)...(K-d)),
// used by tests as an independent check on the quadrature.

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "decoupling/errors.hpp"
#include "decoupling/rational.hpp"

namespace decoupling {

struct BoxSpec {
    int d = 2;
    double delta = 1.0;
    double side_length = 1.0;       // delta^{-1}
    double weight_exponent = 200.0; // 100 d
    double truncation_radius = 3.0; // multiple of delta^{-1}, in x units

    static BoxSpec at_scale(int d, int M, double truncation_multiple = 3.0) {
        if (d < 2) throw invalid_spec_error("box dimension must be >= 2");
        if (M < 1) throw invalid_spec_error("M >= 1 required");
        BoxSpec b;
        b.d = d;
        b.delta = 1.0 / (static_cast<double>(M) * M);
        b.side_length = 1.0 / b.delta;
        b.weight_exponent = 100.0 * d;
        b.truncation_radius = truncation_multiple * b.side_length;
        return b;
    }

    double weight(const double* x) const {
        double r2 = 0.0;
        for (int i = 0; i < d; ++i) r2 += x[i] * x[i];
        return std::pow(1.0 + std::sqrt(r2) * delta, -weight_exponent);
    }
};

namespace detail {

// surface area of the unit sphere in R^d
inline double sphere_area(int d) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

// adaptive Simpson for smooth nonnegative integrands
inline double adaptive_simpson(double (*f)(double, int, double), double a, double b,
                               double fa, double fm, double fb, double tol, int depth,
                               int d, double K) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm, d, K), frm = f(rm, d, K);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double err = left + right - whole;
    if (depth <= 0 || std::abs(err) < 15.0 * tol) return left + right + err / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1, d, K) +
           adaptive_simpson(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1, d, K);
}

inline double radial_integrand(double r, int d, double K) {
    return std::pow(r, d - 1) * std::pow(1.0 + r, -K);
}

// int_0^R r^{d-1} (1+r)^{-K} dr.  The integrand peaks at r = (d-1)/(K-d+1)
// and then decays like (1+r)^{-K}; panels grow geometrically from the peak
// scale so the adaptive rule actually sees the mass.
inline double radial_weight_integral(int d, double K, double R) {
    double peak = (d - 1) / (K - d + 1);
    double lo = 0.0;
    double hi = std::min(peak, R);
    double total = 0.0;
    for (;;) {
        double f0 = radial_integrand(lo, d, K);
        double fm = radial_integrand(0.5 * (lo + hi), d, K);
        double f1 = radial_integrand(hi, d, K);
        total += adaptive_simpson(radial_integrand, lo, hi, f0, fm, f1, 1e-16, 30, d, K);
        if (hi >= R) break;
        lo = hi;
        hi = std::min(2.0 * hi, R);
    }
    return total;
}

} // namespace detail

// integral of w_B over the truncation ball, equal to c(d,R) * delta^{-d}.
// Throws config_error if the analytic tail bound exceeds 1e-6 of the mass.
inline double weight_mass(const BoxSpec& box) {
    double R = box.truncation_radius * box.delta;  // radius in box units
    double K = box.weight_exponent;
    int d = box.d;
    double omega = detail::sphere_area(d);
    double scaled = omega * detail::radial_weight_integral(d, K, R);
    // tail: int_R^inf r^{d-1}(1+r)^{-K} dr <= (1+R)^{d-K}/(K-d)
    double tail = omega * std::pow(1.0 + R, d - K) / (K - d);
    if (tail > 1e-6 * scaled)
        throw config_error("weight truncation radius leaves a tail above 1e-6");
    return scaled * std::pow(box.side_length, d);
}

// closed form of the full-space mass (R = infinity), for cross-checks
inline double weight_mass_closed_form(const BoxSpec& box) {
    double K = box.weight_exponent;
    double value = detail::sphere_area(box.d);
    for (int i = 1; i <= box.d; ++i) value /= K - i;      // 1/((K-1)...(K-d))
    for (int i = 2; i < box.d; ++i) value *= i;           // (d-1)!
    return value * std::pow(box.side_length, box.d);
}

// ||1||_{L^p(w_B)}; for p = infinity the norm of a unimodular function is 1.
inline double weight_norm(const BoxSpec& box, const Lp& p) {
    if (p.is_inf()) return 1.0;
    if (p.rational() < Rational(2)) throw invalid_spec_error("p >= 2 required");
    return std::pow(weight_mass(box), 1.0 / p.value());
}

} // namespace decoupling
