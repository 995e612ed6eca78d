#pragma once

// Paraboloid data: the quadratic surface sum_i v_i xi_i^2 over [0,1]^{d-1}
// with signs v_i = +-1, its signature defect
//   d(v) = min(#{v_i = +1}, #{v_i = -1}),
// and the two critical Lebesgue exponents
//   p_d = 2(d+1)/(d-1),   p_v = 2(d+1-d(v))/(d-1-d(v)).
// Always p_d <= p_v, with equality exactly in the elliptic case d(v) = 0.

#include <algorithm>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "decoupling/errors.hpp"
#include "decoupling/rational.hpp"

namespace decoupling {

using SignVector = std::vector<int>;

inline int signature_defect(const SignVector& v) {
    if (v.empty())
        throw invalid_spec_error("sign vector must have length d-1 >= 1");
    int pos = 0, neg = 0;
    for (int s : v) {
        if (s == 1) ++pos;
        else if (s == -1) ++neg;
        else throw invalid_spec_error("sign vector entries must be +1 or -1");
    }
    return std::min(pos, neg);
}

// "++-" <-> {+1,+1,-1}
inline SignVector parse_signs(std::string_view s) {
    SignVector v;
    v.reserve(s.size());
    for (char c : s) {
        if (c == '+') v.push_back(1);
        else if (c == '-') v.push_back(-1);
        else throw invalid_spec_error(std::string("bad sign character '") + c + "'");
    }
    if (v.empty()) throw invalid_spec_error("empty sign vector");
    return v;
}

inline std::string format_signs(const SignVector& v) {
    std::string s;
    s.reserve(v.size());
    for (int x : v) s.push_back(x == 1 ? '+' : '-');
    return s;
}

struct ParaboloidSpec {
    int d = 0;          // ambient dimension, >= 2
    SignVector v;       // d-1 entries, each +-1
    int dv = 0;         // signature defect
    Rational pd;        // 2(d+1)/(d-1)
    Rational pv;        // 2(d+1-dv)/(d-1-dv)

    static ParaboloidSpec make(int d, SignVector signs) {
        if (d < 2) throw invalid_spec_error("dimension d must be >= 2");
        if (static_cast<int>(signs.size()) != d - 1)
            throw invalid_spec_error("sign vector must have exactly d-1 entries");
        ParaboloidSpec s;
        s.d = d;
        s.dv = signature_defect(signs);
        s.v = std::move(signs);
        if (2 * s.dv > d - 1)
            throw invalid_spec_error("signature defect must satisfy d(v) <= (d-1)/2");
        s.pd = Rational(2 * (d + 1), d - 1);
        s.pv = Rational(2 * (d + 1 - s.dv), d - 1 - s.dv);
        return s;
    }

    static ParaboloidSpec make(int d, std::string_view signs) {
        return make(d, parse_signs(signs));
    }

    // Elliptic paraboloid in dimension d (all signs +1).
    static ParaboloidSpec elliptic(int d) {
        return make(d, SignVector(static_cast<std::size_t>(d - 1), 1));
    }

    bool elliptic_case() const { return dv == 0; }
    std::string signs_str() const { return format_signs(v); }

    // Number of caps N = delta^{-(d-1)/2} = M^{d-1} at scale delta = M^{-2}.
    double caps(int M) const {
        double n = 1.0;
        for (int i = 0; i < d - 1; ++i) n *= M;
        return n;
    }
};

inline std::pair<Rational, Rational> critical_exponents(const ParaboloidSpec& spec) {
    return {spec.pd, spec.pv};
}

} // namespace decoupling
