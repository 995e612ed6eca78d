#pragma once

// Exact rational arithmetic over int64 with 128-bit intermediates.
//
// Every exponent of N handled by this library is an affine rational
// expression in (1/p, 1/q), so all exponent geometry can (and must) be done
// without floating point.  Values are kept in lowest terms with a positive
// denominator; operations that would leave the int64 range after reduction
// throw std::overflow_error.

#include <cstdint>
#include <compare>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace decoupling {

class Rational {
public:
    constexpr Rational() : num_(0), den_(1) {}
    constexpr Rational(std::int64_t n) : num_(n), den_(1) {}
    Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }

    double to_double() const {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    Rational operator-() const { return Rational(-num_, den_); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return from_wide(wide(a.num_) * b.den_ + wide(b.num_) * a.den_,
                         wide(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return from_wide(wide(a.num_) * b.den_ - wide(b.num_) * a.den_,
                         wide(a.den_) * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from_wide(wide(a.num_) * b.num_, wide(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
        return from_wide(wide(a.num_) * b.den_, wide(a.den_) * b.num_);
    }

    Rational& operator+=(const Rational& r) { return *this = *this + r; }
    Rational& operator-=(const Rational& r) { return *this = *this - r; }
    Rational& operator*=(const Rational& r) { return *this = *this * r; }
    Rational& operator/=(const Rational& r) { return *this = *this / r; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        return wide(a.num_) * b.den_ <=> wide(b.num_) * a.den_;
    }

    Rational reciprocal() const {
        if (num_ == 0) throw std::domain_error("Rational: reciprocal of zero");
        return Rational(den_, num_);
    }

    // Canonical form is always "num/den" in lowest terms ("0/1", "1/2", "6/1").
    std::string str() const {
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    // Accepts "num/den" or a bare integer.
    static Rational parse(std::string_view s) {
        auto slash = s.find('/');
        try {
            if (slash == std::string_view::npos)
                return Rational(std::stoll(std::string(s)));
            std::int64_t n = std::stoll(std::string(s.substr(0, slash)));
            std::int64_t d = std::stoll(std::string(s.substr(slash + 1)));
            return Rational(n, d);
        } catch (const std::logic_error&) {
            throw std::invalid_argument("Rational: cannot parse '" + std::string(s) + "'");
        }
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
        return os << r.str();
    }

private:
    using wide = __int128;

    void assign(std::int64_t n, std::int64_t d) {
        if (d == 0) throw std::domain_error("Rational: zero denominator");
        if (d < 0) { n = -n; d = -d; }
        std::int64_t g = std::gcd(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        num_ = n;
        den_ = d == 0 ? 1 : d;
        if (num_ == 0) den_ = 1;
    }

    static Rational from_wide(wide n, wide d) {
        if (d == 0) throw std::domain_error("Rational: zero denominator");
        if (d < 0) { n = -n; d = -d; }
        wide g = gcd_wide(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        if (n == 0) d = 1;
        constexpr wide lo = INT64_MIN, hi = INT64_MAX;
        if (n < lo || n > hi || d > hi)
            throw std::overflow_error("Rational: value exceeds 64-bit range");
        Rational r;
        r.num_ = static_cast<std::int64_t>(n);
        r.den_ = static_cast<std::int64_t>(d);
        return r;
    }

    static wide gcd_wide(wide a, wide b) {
        while (b != 0) { wide t = a % b; a = b; b = t; }
        return a;
    }

    std::int64_t num_;
    std::int64_t den_;
};

inline Rational abs(const Rational& r) { return r.num() < 0 ? -r : r; }
inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }
inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }

// Lebesgue exponent in [2, infinity]; infinity is an explicit marker so the
// reciprocal convention 1/inf = 0 never meets floating-point infinities.
class Lp {
public:
    static Lp finite(Rational p) { return Lp(false, p); }
    static Lp inf() { return Lp(true, Rational(0)); }

    bool is_inf() const { return inf_; }
    const Rational& rational() const {
        if (inf_) throw std::domain_error("Lp: infinite exponent has no rational value");
        return p_;
    }

    // 1/p as an exact rational, with 1/inf = 0.
    Rational reciprocal() const { return inf_ ? Rational(0) : p_.reciprocal(); }

    double value() const {
        return inf_ ? std::numeric_limits<double>::infinity() : p_.to_double();
    }

    std::string str() const { return inf_ ? "inf" : p_.str(); }

    // Accepts "inf", "num/den" or a bare integer.
    static Lp parse(std::string_view s) {
        if (s == "inf" || s == "Inf" || s == "INF") return inf();
        return finite(Rational::parse(s));
    }

    friend bool operator==(const Lp& a, const Lp& b) {
        return a.inf_ == b.inf_ && (a.inf_ || a.p_ == b.p_);
    }

private:
    Lp(bool is_infinite, Rational p) : inf_(is_infinite), p_(p) {}
    bool inf_;
    Rational p_;
};

} // namespace decoupling
