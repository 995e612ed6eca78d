#pragma once

// Decoupling ratios R(g) = ||Eg||_{L^p(B)} / || ||E(g 1_Q)||_{L^p(w_B)} ||_{l^q}
// for the three extremizer families, computed at scale delta = M^{-2} with B
// the cube of half-side delta^{-1} centered at the origin (the box used by
// every lower-bound computation; the supremum over boxes is not searched).
// The l^q aggregate runs over the M^{d-1} caps of side delta^{1/2}.
//
// Exponential-sum family (delta masses at the cap centers): |E(g 1_Q)| = 1,
// so the denominator is exactly count^{1/q} * ||1||_{L^p(w_B)}, and the
// numerator reduces by periodicity to
//   int_B |Eg|^p = delta^{-d} * int_{-1}^{1} S_p(u)^{d-1} du,
// with S_p the profile from the weyl module.  The x_d integral is computed
// in full; no Jensen step, so measured slopes may exceed the predicted
// lower-bound exponents (they must never fall below them).
//
// Constant family (g = 1): E1(x) = prod_i F(x_i, v_i x_d) with the Fresnel
// factor F, so the numerator integral is separable into per-x_d rows; the
// per-cap norm comes from parabolic rescaling of one reference cap to unit
// scale.  At p = infinity everything collapses to the exact values
// |E1(0)| = 1 and |E1_Q(0)| = |Q| = N^{-1}.
//
// Hyperplane family (d(v] >= 1 pairs of delta-mass diagonals times an
// elliptic extremizer h in the remaining d-1-2d(v) variables): Eg factors
// into d(v) Dirichlet-type sums depending on x_k + x_{k+d(v)} only, and each
// pair of coordinates contributes
//   int int_{B_pair} |D_M(delta^{1/2}(x+y))|^p dx dy
//     = 2 delta^{-3/2} M int_{-1}^{1} |D_M(t)|^p dt,
// exactly: the square integral rotates to a triangle-weighted single-period
// integral and |D_M(1-t)| = |D_M(t)| kills the linear part of the weight.
// Off-diagonal caps vanish, so count = M^{d(v)} x (caps of the h factor).

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "decoupling/errors.hpp"
#include "decoupling/exponents.hpp"
#include "decoupling/fresnel.hpp"
#include "decoupling/fit.hpp"
#include "decoupling/paraboloid.hpp"
#include "decoupling/rational.hpp"
#include "decoupling/summation.hpp"
#include "decoupling/weight.hpp"
#include "decoupling/weyl.hpp"

namespace decoupling {

enum class Family { Constant, ExpSum, Hyperplane };

inline const char* family_name(Family f) {
    switch (f) {
        case Family::Constant: return "constant";
        case Family::ExpSum: return "expsum";
        default: return "hyperplane";
    }
}

inline Family parse_family(const std::string& s) {
    if (s == "constant") return Family::Constant;
    if (s == "expsum") return Family::ExpSum;
    if (s == "hyperplane") return Family::Hyperplane;
    throw invalid_spec_error("unknown test-function family '" + s + "'");
}

// Inner extremizer of the hyperplane family's elliptic factor.
enum class InnerKind { None, Unit, Constant, ExpSum };

struct TestFunctionKind {
    Family family = Family::Constant;
    InnerKind inner = InnerKind::None;

    std::string str() const {
        std::string s = family_name(family);
        switch (inner) {
            case InnerKind::Unit: return s + "(1)";
            case InnerKind::Constant: return s + "(constant)";
            case InnerKind::ExpSum: return s + "(expsum)";
            default: return s;
        }
    }
};

struct RatioSample {
    TestFunctionKind kind;
    int d = 0;
    std::string signs;
    int M = 0;
    Lp p = Lp::inf();
    Lp q = Lp::inf();
    double numerator = 0.0;
    double denominator = 0.0;
    double ratio = 0.0;
    double err_estimate = 0.0;
};

struct HarnessConfig {
    int ox = 4;
    int oy = 4;
    double truncation_multiple = 3.0;
    std::int64_t max_nodes = std::int64_t(1) << 33;
    double constant_spacing = 0.5;  // E1 grid step over B (unit spacing x oversampling 2)

    HarnessConfig doubled() const {
        return HarnessConfig{2 * ox, 2 * oy, truncation_multiple, max_nodes,
                             0.5 * constant_spacing};
    }
};

namespace detail {

// ceil(p * mult / 4): the per-period oversampling that keeps |.|^p
// quadratures bandlimited-exact for even p and well-sampled otherwise.
inline int oversampling_for(const Lp& p, int mult) {
    if (p.is_inf()) return 1;
    std::int64_t n = p.rational().num() * mult;
    std::int64_t d = p.rational().den() * 4;
    return static_cast<int>((n + d - 1) / d);
}

inline double ipow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

inline void require_pq(const Lp& p, const Lp& q) {
    if (!p.is_inf() && p.rational() < Rational(2))
        throw invalid_spec_error("ratio computations need p >= 2");
    if (!q.is_inf() && q.rational() < Rational(2))
        throw invalid_spec_error("ratio computations need q >= 2");
}

// int_B |Eg|^p for the exponential-sum family via the profile identity,
// with grids sized to the bandwidth of S_p^{power}.
inline double expsum_numerator_p(int d, int M, const Lp& p, const HarnessConfig& cfg) {
    int power = d - 1;
    int s_xd = std::max(cfg.oy, oversampling_for(p, power));
    int s_row = std::max(cfg.ox, oversampling_for(p, 1));
    int G = 2 * s_xd * (2 * M * M + 1);
    SpProfile prof = sp_profile(WeylSumSpec::make(M), p, G, s_row, cfg.max_nodes);
    double I = prof.integral_of_power(power);
    return ipow(static_cast<double>(M) * M, d) * I;  // delta^{-d} * I
}

// One x_d row of the constant-family numerator: h * sum_a |F(x_a, b)|^p
// over the midpoint grid of [-L, L].  By |F(a,-b)| = |F(-a,b)| and the
// symmetry of the grid this is an even function of b.
inline double constant_row_integral(double L, double h, int n, double b, double p_value) {
    NeumaierSum acc;
    for (int k = 0; k < n; ++k) {
        double a = -L + (k + 0.5) * h;
        double m = std::abs(fresnel_eval(a, b));
        acc.add(std::pow(m, p_value));
    }
    return h * acc.value();
}

// int_B prod_i |F(x_i, v_i x_d)|^p over the midpoint grid with spacing h;
// separability turns the d-dimensional sum into rows over x_d.
inline double constant_numerator_p(int d, int M, const Lp& p, const HarnessConfig& cfg) {
    if (d > 3) throw resource_error("finite-p constant-family runs are limited to d <= 3");
    const double L = static_cast<double>(M) * M;  // half-side delta^{-1}
    const double h = cfg.constant_spacing;
    const int n = static_cast<int>(std::lround(2.0 * L / h));
    if (static_cast<std::int64_t>(n) * n / 2 > cfg.max_nodes)
        throw resource_error("constant-family grid exceeds node budget");
    const double pv = p.value();

    // global negation x -> -x pairs the rows, so only b > 0 rows are summed
    const std::int64_t blocks = (n / 2 + kRowBlock - 1) / kRowBlock;
    std::vector<double> partial = map_blocks<double>(blocks, [&](std::int64_t blk) {
        int k0 = static_cast<int>(blk) * kRowBlock;
        int k1 = std::min(n / 2, k0 + kRowBlock);
        NeumaierSum acc;
        for (int k = k0; k < k1; ++k) {
            double b = (k + 0.5) * h;  // row at x_d = b and its mirror image
            double row = constant_row_integral(L, h, n, b, pv);
            acc.add(2.0 * h * ipow(row, d - 1));
        }
        return acc.value();
    });
    return sum_ordered(partial);
}

// 8-point Gauss-Legendre rule on [-1, 1] (positive half; mirror).
struct GaussLegendre8 {
    static constexpr double node[4] = {
        0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
        0.9602898564975363};
    static constexpr double weight[4] = {
        0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
        0.1012285362903763};
};

// Composite GL8 quadrature nodes/weights on [-range, range] whose panel
// widths grow geometrically from `fine` at the origin and are capped at
// `cap`: resolves an origin peak of width ~fine and structure of scale ~cap
// everywhere else.
inline std::vector<std::pair<double, double>> graded_axis(double range, double fine,
                                                          double cap) {
    std::vector<std::pair<double, double>> out;
    double lo = 0.0, width = fine;
    while (lo < range) {
        double hi = std::min(lo + width, range);
        double h = 0.5 * (hi - lo), m = 0.5 * (lo + hi);
        for (int k = 0; k < 4; ++k) {
            for (double sgn : {-1.0, 1.0}) {
                double node = m + sgn * h * GaussLegendre8::node[k];
                double w = h * GaussLegendre8::weight[k];
                out.emplace_back(node, w);
                out.emplace_back(-node, w);
            }
        }
        lo = hi;
        width = std::min(2.0 * width, cap);
    }
    return out;
}

// ||E(1_Q)||_{L^p(w_B)}^p for one reference cap via parabolic rescaling.
// The cap nearest the origin (center c_i = delta^{1/2}/2) rescales to the
// unit cube: |E1_Q(x)| = delta^{(d-1)/2} prod_i |F~(y_i, v_i y_d)| with
// y_i = delta^{1/2} x_i + v_i delta x_d, y_d = delta x_d and
// |F~(a,b)| = |F(a-b, b)| the centered-cube Fresnel factor.  In box units
// z = x delta this is
//   percell^p = delta^{p(d-1)/2 - d} *
//               int_{|z|<=R} (1+|z|)^{-K} prod_i |F~(M z_i + v_i z_d, v_i z_d)|^p dz.
// The weight peaks at |z| ~ 1/K while the Fresnel factors oscillate on the
// scale 1/M in z_i and unit scale in z_d, hence the graded axes.  Flipping
// z_i for the v_i = -1 coordinates shows the value does not depend on the
// signs, so the plus version is computed.
//
// Scaling note: the origin peak of the weight carries mass ~ c_d delta^{-d}
// concentrated where |F~| ~ 1, so for M below the weight exponent K = 100 d
// the norm behaves like |Q| (integral w_B)^{1/p}; the asymptotic tube
// scaling delta^{(d-1)/2 - (d+1)/(2p)} takes over only for M >> K.
inline double constant_percell_p(int d, int M, const Lp& p, const HarnessConfig& cfg) {
    if (d > 3) throw resource_error("finite-p per-cap norms are limited to d <= 3");
    const double pv = p.value();
    const double delta = 1.0 / (static_cast<double>(M) * M);
    const double R = cfg.truncation_multiple;
    const double K = 100.0 * d;

    auto zi_axis = graded_axis(R, cfg.constant_spacing / K,
                               4.0 * cfg.constant_spacing / M);
    auto zd_axis = graded_axis(R, cfg.constant_spacing / K, 0.5 * cfg.constant_spacing);
    double work = static_cast<double>(zd_axis.size());
    for (int i = 1; i < d; ++i) work *= static_cast<double>(zi_axis.size());
    if (work > static_cast<double>(cfg.max_nodes))
        throw resource_error("per-cap quadrature exceeds node budget");

    std::vector<double> row(zi_axis.size());
    NeumaierSum acc;
    for (const auto& [zd, wd] : zd_axis) {
        for (std::size_t k = 0; k < zi_axis.size(); ++k) {
            double a = M * zi_axis[k].first + zd;
            row[k] = std::pow(std::abs(fresnel_eval(a - zd, zd)), pv);
        }
        if (d == 2) {
            NeumaierSum s;
            for (std::size_t k = 0; k < zi_axis.size(); ++k) {
                double zi = zi_axis[k].first;
                double w = std::pow(1.0 + std::sqrt(zi * zi + zd * zd), -K);
                s.add(zi_axis[k].second * w * row[k]);
            }
            acc.add(wd * s.value());
        } else {
            NeumaierSum s;
            for (std::size_t ka = 0; ka < zi_axis.size(); ++ka) {
                double za = zi_axis[ka].first;
                for (std::size_t kb = 0; kb < zi_axis.size(); ++kb) {
                    double zb = zi_axis[kb].first;
                    double w = std::pow(1.0 + std::sqrt(za * za + zb * zb + zd * zd), -K);
                    s.add(zi_axis[ka].second * zi_axis[kb].second * w * row[ka] * row[kb]);
                }
            }
            acc.add(wd * s.value());
        }
    }
    double scale = std::pow(delta, 0.5 * pv * (d - 1) - d);
    return scale * acc.value();
}

// Pair-coordinate factor of the hyperplane numerator (see file header).
inline double hyperplane_pair_factor_p(int M, const Lp& p, const HarnessConfig& cfg) {
    int s_row = std::max(cfg.ox, oversampling_for(p, 1));
    double delta32 = ipow(static_cast<double>(M), 3);  // delta^{-3/2}
    return 2.0 * delta32 * M * dirichlet_moment(M, p, s_row);
}

} // namespace detail

// ||1||_{L^p(w_B)} at scale M in dimension d, the per-cap norm of every
// unimodular piece.
inline double unimodular_percell(int d, int M, const Lp& p, const HarnessConfig& cfg) {
    return weight_norm(BoxSpec::at_scale(d, M, cfg.truncation_multiple), p);
}

inline RatioSample ratio_expsum(const ParaboloidSpec& spec, int M, const Lp& p, const Lp& q,
                                const HarnessConfig& cfg = {}, bool with_error = false) {
    detail::require_pq(p, q);
    RatioSample out;
    out.kind = {Family::ExpSum, InnerKind::None};
    out.d = spec.d;
    out.signs = spec.signs_str();
    out.M = M;
    out.p = p;
    out.q = q;

    // the numerator identity only sees |.|, so the signs v_i drop out
    out.numerator = p.is_inf()
                        ? spec.caps(M)
                        : std::pow(detail::expsum_numerator_p(spec.d, M, p, cfg), 1.0 / p.value());
    double count = spec.caps(M);
    out.denominator = std::pow(count, q.reciprocal().to_double()) *
                      unimodular_percell(spec.d, M, p, cfg);
    out.ratio = out.numerator / out.denominator;
    if (with_error && !p.is_inf()) {
        double num2 = std::pow(detail::expsum_numerator_p(spec.d, M, p, cfg.doubled()),
                               1.0 / p.value());
        out.err_estimate = std::abs(num2 / out.denominator - out.ratio);
    }
    return out;
}

inline RatioSample ratio_constant(const ParaboloidSpec& spec, int M, const Lp& p, const Lp& q,
                                  const HarnessConfig& cfg = {}, bool with_error = false) {
    detail::require_pq(p, q);
    RatioSample out;
    out.kind = {Family::Constant, InnerKind::None};
    out.d = spec.d;
    out.signs = spec.signs_str();
    out.M = M;
    out.p = p;
    out.q = q;

    double count = spec.caps(M);
    if (p.is_inf()) {
        out.numerator = 1.0;                    // |E1(0)|
        double percell = 1.0 / count;           // |E1_Q(0)| = |Q| = N^{-1}
        out.denominator = std::pow(count, q.reciprocal().to_double()) * percell;
    } else {
        out.numerator = std::pow(detail::constant_numerator_p(spec.d, M, p, cfg), 1.0 / p.value());
        double percell = std::pow(detail::constant_percell_p(spec.d, M, p, cfg), 1.0 / p.value());
        out.denominator = std::pow(count, q.reciprocal().to_double()) * percell;
    }
    out.ratio = out.numerator / out.denominator;
    if (with_error && !p.is_inf()) {
        HarnessConfig fine = cfg.doubled();
        fine.max_nodes = cfg.max_nodes * 4;
        double num2 = std::pow(detail::constant_numerator_p(spec.d, M, p, fine), 1.0 / p.value());
        double den2 = std::pow(count, q.reciprocal().to_double()) *
                      std::pow(detail::constant_percell_p(spec.d, M, p, fine), 1.0 / p.value());
        out.err_estimate = std::abs(num2 / den2 - out.ratio);
    }
    return out;
}

inline RatioSample ratio_hyperplane(const ParaboloidSpec& spec, int M, const Lp& p, const Lp& q,
                                    const HarnessConfig& cfg = {}, bool with_error = false) {
    detail::require_pq(p, q);
    if (spec.dv < 1)
        throw invalid_spec_error("hyperplane family needs signature defect >= 1");

    const int d = spec.d;
    const int inner_dims = d - 1 - 2 * spec.dv;  // elliptic variables of h
    const int dprime = d - 2 * spec.dv;          // ambient dimension of the h factor

    RatioSample out;
    out.kind.family = Family::Hyperplane;
    out.d = d;
    out.signs = spec.signs_str();
    out.M = M;
    out.p = p;
    out.q = q;

    if (inner_dims == 0) {
        out.kind.inner = InnerKind::Unit;
    } else {
        Rational inner_critical(2 * (dprime + 1), dprime - 1);  // p_{d'}
        bool constant_inner = p.is_inf() || p.rational() >= inner_critical;
        out.kind.inner = constant_inner ? InnerKind::Constant : InnerKind::ExpSum;
    }

    const double dM = static_cast<double>(M);
    const double count = detail::ipow(dM, spec.dv + std::max(inner_dims, 0));

    if (p.is_inf()) {
        double inner_num = out.kind.inner == InnerKind::ExpSum ? detail::ipow(dM, inner_dims) : 1.0;
        out.numerator = detail::ipow(dM, spec.dv) * inner_num;  // |Eg(0)|
        double percell = out.kind.inner == InnerKind::Constant
                             ? detail::ipow(1.0 / dM, inner_dims)  // |Q~| of the h factor
                             : 1.0;
        out.denominator = std::pow(count, q.reciprocal().to_double()) * percell;
        out.ratio = out.numerator / out.denominator;
        return out;
    }

    const double pv = p.value();
    double pair = detail::hyperplane_pair_factor_p(M, p, cfg);
    double hnum_p;
    double percell;
    switch (out.kind.inner) {
        case InnerKind::Unit:
            hnum_p = 2.0 * dM * dM;  // int over x_d of 1 across [-delta^{-1}, delta^{-1}]
            percell = unimodular_percell(d, M, p, cfg);
            break;
        case InnerKind::ExpSum:
            hnum_p = detail::expsum_numerator_p(dprime, M, p, cfg);
            percell = unimodular_percell(d, M, p, cfg);
            break;
        default: {  // Constant
            hnum_p = detail::constant_numerator_p(dprime, M, p, cfg);
            double pair_volume = std::pow(2.0 * dM * dM, 2.0 * spec.dv / pv);
            percell = pair_volume *
                      std::pow(detail::constant_percell_p(dprime, M, p, cfg), 1.0 / pv);
            break;
        }
    }
    out.numerator = std::pow(detail::ipow(pair, spec.dv) * hnum_p, 1.0 / pv);
    out.denominator = std::pow(count, q.reciprocal().to_double()) * percell;
    out.ratio = out.numerator / out.denominator;
    if (with_error) {
        double pair2 = detail::hyperplane_pair_factor_p(M, p, cfg.doubled());
        double num2 = std::pow(detail::ipow(pair2, spec.dv) * hnum_p, 1.0 / pv);
        out.err_estimate = std::abs(num2 / out.denominator - out.ratio);
    }
    return out;
}

inline RatioSample compute_ratio(Family family, const ParaboloidSpec& spec, int M,
                                 const Lp& p, const Lp& q, const HarnessConfig& cfg = {},
                                 bool with_error = false) {
    switch (family) {
        case Family::Constant: return ratio_constant(spec, M, p, q, cfg, with_error);
        case Family::ExpSum: return ratio_expsum(spec, M, p, q, cfg, with_error);
        default: return ratio_hyperplane(spec, M, p, q, cfg, with_error);
    }
}

// Ratio series over an M ladder, abscissa N = M^{d-1}.
inline ScalingSeries ratio_series(Family family, const ParaboloidSpec& spec,
                                  const std::vector<int>& ladder, const Lp& p, const Lp& q,
                                  const HarnessConfig& cfg = {}) {
    ScalingSeries s;
    s.label = std::string(family_name(family)) + " d=" + std::to_string(spec.d) +
              " p=" + p.str() + " q=" + q.str();
    for (int M : ladder) {
        RatioSample r = compute_ratio(family, spec, M, p, q, cfg);
        s.points.emplace_back(spec.caps(M), r.ratio);
    }
    return s;
}

// The 1D Dirichlet factor of the hyperplane proof:
//   J(delta) = delta^{-1} * int_{|z| <= delta^{-1}} |sum_j e(delta^{1/2} j z)|^p dz
//            = delta^{-3/2} M int_{-1}^{1} |D_M(t)|^p dt,
// expected to scale like delta^{-(p+3)/2}.  The series abscissa is
// delta^{-1} = M^2, so the fitted slope estimates +(p+3)/2.
inline ScalingSeries dirichlet_factor_series(const std::vector<int>& ladder, const Lp& p,
                                             const HarnessConfig& cfg = {}) {
    if (p.is_inf()) throw invalid_spec_error("the Dirichlet factor check needs finite p");
    ScalingSeries s;
    s.label = "dirichlet-factor p=" + p.str();
    int s_row = std::max(cfg.ox, detail::oversampling_for(p, 1));
    for (int M : ladder) {
        double delta_inv = static_cast<double>(M) * M;
        double value = detail::ipow(static_cast<double>(M), 3) * M *
                       dirichlet_moment(M, p, s_row);
        s.points.emplace_back(delta_inv, value);
    }
    return s;
}

// The predicted lower-bound exponent of one family at (p, q).
inline Rational predicted_lower_exponent(Family family, const ParaboloidSpec& spec,
                                         const Lp& p, const Lp& q) {
    DiagramPoint pt = DiagramPoint::from_pq(p, q);
    switch (family) {
        case Family::Constant: return lower_bound_constant(spec, pt);
        case Family::ExpSum: return lower_bound_expsum(spec, pt);
        default: return lower_bound_hyperplane(spec, pt);
    }
}

inline Rational sharp_exponent_at(const ParaboloidSpec& spec, const Lp& p, const Lp& q) {
    return sharp_exponent(spec, DiagramPoint::from_pq(p, q)).sharp;
}

// One-sided acceptance rule for measured ratio slopes: the fit must not fall
// below the predicted exponent by more than tol, and must not exceed the
// sharp exponent by more than the sanity slack.
struct SlopeCheck {
    double slope = 0.0;
    double predicted = 0.0;
    double sharp = 0.0;
    double tol = 0.1;
    double cap_slack = 0.15;

    bool lower_ok() const { return slope >= predicted - tol; }
    bool upper_ok() const { return slope <= sharp + cap_slack; }
    bool ok() const { return lower_ok() && upper_ok(); }
};

inline SlopeCheck one_sided_check(const FitResult& fit, const Rational& predicted,
                                  const Rational& sharp, double tol = 0.1,
                                  double cap_slack = 0.15) {
    SlopeCheck c;
    c.slope = fit.slope;
    c.predicted = predicted.to_double();
    c.sharp = sharp.to_double();
    c.tol = tol;
    c.cap_slack = cap_slack;
    return c;
}

} // namespace decoupling
