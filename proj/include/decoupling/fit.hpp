#pragma once

// Log-log regression against the scale parameter N with verdicts against
// predicted rational exponents.  A series value ~ C * N^alpha fits a line in
// (log N, log value); the slope estimates alpha and the maximum absolute
// residual (in log units) measures how power-law-like the data is.
//
// Verdict rule: pass when |slope - predicted| <= tol; otherwise inconclusive
// when the residual exceeds tol/2 (the data is too far from a power law to
// call a hard failure), else fail.  Epsilon-loss factors in the underlying
// bounds make slopes converge slowly, hence the wide default tolerances and
// the inconclusive state.

#include <cmath>
#include <string>
#include <vector>

#include "decoupling/errors.hpp"
#include "decoupling/rational.hpp"

namespace decoupling {

struct ScalingSeries {
    std::vector<std::pair<double, double>> points;  // (N, value), N increasing
    std::string label;

    void validate() const {
        if (points.size() < 3)
            throw invalid_spec_error("scaling series needs at least 3 points");
        double prev = 0.0;
        for (const auto& [n, v] : points) {
            if (!(n > prev)) throw invalid_spec_error("abscissas must be positive and increasing");
            if (!(v > 0.0)) throw std::domain_error("series values must be positive");
            prev = n;
        }
    }
};

enum class Verdict { Pass, Fail, Inconclusive, None };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Inconclusive: return "inconclusive";
        default: return "none";
    }
}

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;
    Verdict verdict = Verdict::None;
    double predicted = 0.0;
    double tolerance = 0.0;
};

namespace detail {

inline FitResult least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    FitResult fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    for (std::size_t i = 0; i < n; ++i)
        fit.max_residual = std::max(fit.max_residual,
                                    std::abs(y[i] - (fit.intercept + fit.slope * x[i])));
    return fit;
}

} // namespace detail

inline FitResult fit_exponent(const ScalingSeries& series) {
    series.validate();
    std::vector<double> x, y;
    x.reserve(series.points.size());
    y.reserve(series.points.size());
    for (const auto& [n, v] : series.points) {
        x.push_back(std::log(n));
        y.push_back(std::log(v));
    }
    return detail::least_squares(x, y);
}

inline FitResult compare(FitResult fit, const Rational& predicted, double tol) {
    if (!(tol > 0.0)) throw invalid_spec_error("tolerance must be positive");
    fit.predicted = predicted.to_double();
    fit.tolerance = tol;
    if (std::abs(fit.slope - fit.predicted) <= tol)
        fit.verdict = Verdict::Pass;
    else if (fit.max_residual > 0.5 * tol)
        fit.verdict = Verdict::Inconclusive;
    else
        fit.verdict = Verdict::Fail;
    return fit;
}

// Least squares of value against log M (natural units, not log-log); the
// returned pair (a, b) satisfies value ~ a + b log M.
inline std::pair<double, double> log_growth_fit(
    const std::vector<std::pair<double, double>>& series) {
    if (series.size() < 3)
        throw invalid_spec_error("log-growth fit needs at least 3 points");
    std::vector<double> x, y;
    x.reserve(series.size());
    y.reserve(series.size());
    for (const auto& [m, v] : series) {
        if (!(m > 0.0)) throw std::domain_error("abscissas must be positive");
        x.push_back(std::log(m));
        y.push_back(v);
    }
    FitResult f = detail::least_squares(x, y);
    return {f.intercept, f.slope};
}

} // namespace decoupling
