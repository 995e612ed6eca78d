#pragma once

// Sharp decoupling exponents as exact rationals.
//
// For a paraboloid with d >= 2, signs v and defect d(v), the decoupling
// constant grows like N^alpha with
//   alpha = 1/2 - 1/q                                      on the trapezoid,
//   alpha = 1/2 - 1/q + (d(v)/(d-1))(1/q - 1/p)            on the triangle,
//   alpha = 1 - (p_d/2)(1/p) - 1/q                          on the pentagon,
// and alpha equals, at every point of the square, the pointwise maximum of
// the three extremizer lower bounds
//   constant family:     1 - (p_d/2)(1/p) - 1/q
//   exponential sums:    max(1/2 - 1/q, 1 - 3(1/p) - 1/q)
//   hyperplane family:   1/2 - 1/q + (d(v)/(d-1))(1/q - 1/p).
// The hyperplane exponent carries the correction with the (1/q - 1/p) sign;
// that is the sign under which the triangle formula and the l1 line are
// mutually consistent and the q=2 endpoint matches the reference bound below.
//
// verify_sharpness_identity sweeps every rational point of the diagram with
// bounded denominator and checks the max identity, the agreement of region
// formulas across shared boundaries, and (elliptic case) the two-term max
// form; it reports violations instead of throwing.

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "decoupling/diagram.hpp"
#include "decoupling/paraboloid.hpp"
#include "decoupling/rational.hpp"

namespace decoupling {

inline Rational lower_bound_constant(const ParaboloidSpec& spec, const DiagramPoint& pt) {
    return Rational(1) - spec.pd / Rational(2) * pt.rp - pt.rq;
}

inline Rational lower_bound_expsum(const ParaboloidSpec&, const DiagramPoint& pt) {
    // The second branch uses the d=2 critical exponent p_2 = 6 regardless of
    // the ambient dimension; for d >= 3, p > p_d it stays strictly below the
    // sharp exponent, so only the first branch matters there.
    Rational first = Rational(1, 2) - pt.rq;
    Rational second = Rational(1) - Rational(3) * pt.rp - pt.rq;
    return max(first, second);
}

inline Rational lower_bound_hyperplane(const ParaboloidSpec& spec, const DiagramPoint& pt) {
    Rational correction = Rational(spec.dv, spec.d - 1) * (pt.rq - pt.rp);
    return Rational(1, 2) - pt.rq + correction;
}

// Exponent formula of one named region, defined on the whole square.
inline Rational region_formula(const ParaboloidSpec& spec, Region region,
                               const DiagramPoint& pt) {
    switch (region) {
        case Region::Trapezoid:
            return Rational(1, 2) - pt.rq;
        case Region::Triangle:
            return Rational(1, 2) - pt.rq + Rational(spec.dv, spec.d - 1) * (pt.rq - pt.rp);
        default:
            return Rational(1) - spec.pd / Rational(2) * pt.rp - pt.rq;
    }
}

struct ExponentBreakdown {
    Rational sharp;
    RegionLabel region;
    Rational lb_constant;
    Rational lb_expsum;
    Rational lb_hyperplane;
    std::set<std::string> attained_by;
};

inline ExponentBreakdown sharp_exponent(const ParaboloidSpec& spec, const DiagramPoint& pt) {
    ExponentBreakdown b;
    b.region = classify(spec, pt);
    b.sharp = region_formula(spec, b.region.primary(), pt);
    b.lb_constant = lower_bound_constant(spec, pt);
    b.lb_expsum = lower_bound_expsum(spec, pt);
    b.lb_hyperplane = lower_bound_hyperplane(spec, pt);
    if (b.lb_constant == b.sharp) b.attained_by.insert("constant");
    if (b.lb_expsum == b.sharp) b.attained_by.insert("expsum");
    if (b.lb_hyperplane == b.sharp) b.attained_by.insert("hyperplane");
    return b;
}

struct UpperBound {
    std::string source;  // "elliptic-l2", "diagonal-lq", "hyperbolic-l2"
    Rational exponent;
};

// Reference growth exponents from the known upper bounds, each valid on its
// own slice of the diagram; inapplicable sources are omitted.
inline std::vector<UpperBound> reference_upper_bounds(const ParaboloidSpec& spec,
                                                      const DiagramPoint& pt) {
    std::vector<UpperBound> out;
    const Rational half(1, 2);
    bool q_is_2 = pt.rq == half;
    bool q_eq_p = pt.rq == pt.rp;

    if (q_is_2 && spec.dv == 0) {
        // elliptic, q = 2: max(0, 1/2 - (p_d/2)(1/p))
        out.push_back({"elliptic-l2", max(Rational(0), half - spec.pd / Rational(2) * pt.rp)});
    }
    if (q_eq_p) {
        // q = p, any signs: max(1/2 - 1/p, 1 - 1/p - (p_d/2)(1/p))
        Rational a = half - pt.rp;
        Rational b = Rational(1) - pt.rp - spec.pd / Rational(2) * pt.rp;
        out.push_back({"diagonal-lq", max(a, b)});
    }
    if (q_is_2) {
        // q = 2, any signs, two branches split at p = p_v.
        Rational inv_pv = spec.pv.reciprocal();
        Rational e = pt.rp >= inv_pv
                         ? Rational(spec.dv, spec.d - 1) * (half - pt.rp)
                         : half - spec.pd / Rational(2) * pt.rp;
        out.push_back({"hyperbolic-l2", e});
    }
    return out;
}

// One rational grid point that violated a sharpness identity.
struct SharpnessViolation {
    DiagramPoint point;
    std::string check;
    std::string detail;
};

struct SharpnessReport {
    int d = 0;
    std::string signs;
    int denominator_bound = 0;
    std::int64_t points_checked = 0;
    std::vector<SharpnessViolation> violations;
    std::int64_t violation_count = 0;

    bool ok() const { return violation_count == 0; }
};

// All fractions a/b in [0, 1/2] with b <= bound, in lowest terms.
inline std::vector<Rational> farey_half(int bound) {
    std::vector<Rational> out;
    out.emplace_back(0);
    for (int b = 2; b <= bound; ++b)
        for (int a = 1; 2 * a <= b; ++a)
            if (std::gcd(a, b) == 1) out.emplace_back(a, b);
    return out;
}

inline SharpnessReport verify_sharpness_identity(const ParaboloidSpec& spec,
                                                 int denominator_bound,
                                                 std::size_t max_reported = 32) {
    if (denominator_bound < 2)
        throw invalid_spec_error("denominator bound must be >= 2");

    SharpnessReport report;
    report.d = spec.d;
    report.signs = spec.signs_str();
    report.denominator_bound = denominator_bound;

    auto record = [&](const DiagramPoint& pt, const char* check, std::string detail) {
        ++report.violation_count;
        if (report.violations.size() < max_reported)
            report.violations.push_back({pt, check, std::move(detail)});
    };

    std::vector<Rational> ticks = farey_half(denominator_bound);
    for (const Rational& rp : ticks) {
        for (const Rational& rq : ticks) {
            DiagramPoint pt(rp, rq);
            ++report.points_checked;

            ExponentBreakdown b = sharp_exponent(spec, pt);
            Rational lb_max = max(b.lb_constant, max(b.lb_expsum, b.lb_hyperplane));

            if (b.sharp != lb_max)
                record(pt, "max-identity",
                       "sharp " + b.sharp.str() + " != max of lower bounds " + lb_max.str());

            if (b.attained_by.empty())
                record(pt, "attained-by", "no extremizer attains the sharp exponent");

            // All region formulas whose label contains the point must agree.
            for (Region r : {Region::Trapezoid, Region::Triangle, Region::Pentagon}) {
                if (!b.region.contains(r)) continue;
                Rational f = region_formula(spec, r, pt);
                if (f != b.sharp)
                    record(pt, "boundary-continuity",
                           std::string(region_name(r)) + " formula " + f.str() +
                               " != sharp " + b.sharp.str());
            }

            if (spec.dv == 0) {
                // Elliptic case: the piecewise result collapses to a two-term max.
                Rational two_term = max(Rational(1, 2) - rq,
                                        Rational(1) - spec.pd / Rational(2) * rp - rq);
                if (b.sharp != two_term)
                    record(pt, "elliptic-two-term",
                           "sharp " + b.sharp.str() + " != " + two_term.str());
            }
        }
    }
    return report;
}

} // namespace decoupling
