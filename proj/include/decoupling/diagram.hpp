#pragma once

// Interpolation-diagram geometry.  A DiagramPoint is (1/p, 1/q) in
// [0,1/2]^2 with 1/inf = 0.  The anchor points
//   A1=(0,0)  A2=(0,1/2)  A3=(1/p_v,1/2)  A4=(1/p_d,1/p_d)
//   A5=(1/p_d,0)  A6=(1/2,0)  A7=(1/2,1/2)
// split the square into three exponent regions:
//   trapezoid A4 A5 A6 A7, triangle A3 A4 A7, pentagon A1 A2 A3 A4 A5.
// The triangle/pentagon border is the critical line l1 through A3 and A4,
//   1/2 - (p_d/2)(1/p) = (d(v)/(d-1)) (1/q - 1/p),
// and the triangle/trapezoid border is the diagonal l2: 1/p = 1/q.
// All sidedness tests are exact rational comparisons.  In the elliptic case
// d(v) = 0 the triangle's exponent formula coincides with the trapezoid's,
// so the triangle label is dropped and the trapezoid covers 1/p >= 1/p_d.

#include <string>

#include "decoupling/errors.hpp"
#include "decoupling/paraboloid.hpp"
#include "decoupling/rational.hpp"

namespace decoupling {

struct DiagramPoint {
    Rational rp;  // 1/p
    Rational rq;  // 1/q

    DiagramPoint(Rational reciprocal_p, Rational reciprocal_q)
        : rp(reciprocal_p), rq(reciprocal_q) {
        const Rational half(1, 2);
        if (rp < Rational(0) || rp > half || rq < Rational(0) || rq > half)
            throw std::domain_error("diagram point must lie in [0,1/2]^2");
    }

    static DiagramPoint from_pq(const Lp& p, const Lp& q) {
        return DiagramPoint(p.reciprocal(), q.reciprocal());
    }

    friend bool operator==(const DiagramPoint& a, const DiagramPoint& b) {
        return a.rp == b.rp && a.rq == b.rq;
    }
};

struct AnchorSet {
    DiagramPoint a1, a2, a3, a4, a5, a6, a7;
    Rational dv_ratio;  // d(v)/(d-1)
    Rational pd;

    static AnchorSet make(const ParaboloidSpec& spec) {
        const Rational half(1, 2);
        const Rational zero(0);
        Rational inv_pd = spec.pd.reciprocal();
        Rational inv_pv = spec.pv.reciprocal();
        return AnchorSet{
            DiagramPoint(zero, zero),      DiagramPoint(zero, half),
            DiagramPoint(inv_pv, half),    DiagramPoint(inv_pd, inv_pd),
            DiagramPoint(inv_pd, zero),    DiagramPoint(half, zero),
            DiagramPoint(half, half),
            Rational(spec.dv, spec.d - 1), spec.pd};
    }

    // Signed residual of l1; zero on the line, positive strictly east of it.
    Rational l1_residual(const DiagramPoint& pt) const {
        return dv_ratio * (pt.rq - pt.rp) - (Rational(1, 2) - pd / Rational(2) * pt.rp);
    }

    // Signed residual of the diagonal l2; positive above it.
    Rational l2_residual(const DiagramPoint& pt) const { return pt.rq - pt.rp; }
};

enum class Region { Trapezoid, Triangle, Pentagon };

inline const char* region_name(Region r) {
    switch (r) {
        case Region::Trapezoid: return "trapezoid";
        case Region::Triangle: return "triangle";
        default: return "pentagon";
    }
}

// Membership is inclusive of boundaries, so a point may carry several labels;
// the shared-edge exponent formulas agree wherever labels overlap.
struct RegionLabel {
    bool trapezoid = false;
    bool triangle = false;
    bool pentagon = false;

    Region primary() const {
        if (trapezoid) return Region::Trapezoid;
        if (triangle) return Region::Triangle;
        return Region::Pentagon;
    }

    bool contains(Region r) const {
        switch (r) {
            case Region::Trapezoid: return trapezoid;
            case Region::Triangle: return triangle;
            default: return pentagon;
        }
    }

    int count() const { return (trapezoid ? 1 : 0) + (triangle ? 1 : 0) + (pentagon ? 1 : 0); }
    bool on_boundary() const { return count() > 1; }

    std::string str() const {
        std::string s = region_name(primary());
        for (Region r : {Region::Trapezoid, Region::Triangle, Region::Pentagon}) {
            if (r != primary() && contains(r)) {
                s += "|";
                s += region_name(r);
            }
        }
        return s;
    }
};

inline RegionLabel classify(const ParaboloidSpec& spec, const DiagramPoint& pt) {
    AnchorSet anchors = AnchorSet::make(spec);
    const Rational zero(0);
    Rational vert = pt.rp - spec.pd.reciprocal();  // east of the A4-A5 column
    Rational diag = anchors.l2_residual(pt);
    Rational l1 = anchors.l1_residual(pt);

    RegionLabel label;
    if (spec.dv == 0) {
        // Triangle and trapezoid formulas coincide; two regions split at the
        // A3-A4-A5 column.
        label.trapezoid = vert >= zero;
        label.pentagon = vert <= zero;
        return label;
    }
    label.trapezoid = vert >= zero && diag <= zero;
    label.triangle = l1 >= zero && diag >= zero;
    label.pentagon = l1 <= zero && vert <= zero;
    return label;
}

} // namespace decoupling
