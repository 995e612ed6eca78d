#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "decoupling/fresnel.hpp"
#include "decoupling/weight.hpp"

using namespace decoupling;

TEST_CASE("F(0,0) = 1 and |F| <= 1 everywhere") {
    CHECK(std::abs(fresnel_eval(0, 0) - std::complex<double>{1.0, 0.0}) < 1e-12);
    for (double a : {-300.0, -7.5, -0.3, 0.0, 2.0, 41.0, 1500.0})
        for (double b : {-900.0, -2.0, -0.4, 0.0, 0.3, 5.0, 800.0})
            CHECK(std::abs(fresnel_eval(a, b)) <= 1.0 + 1e-9);
}

TEST_CASE("b = 0 closed form: F(a,0)=(e(a)-1)/(2 pi i a)") {
    for (double a : {0.5, 1.0, -2.5, 17.0, 120.0, -800.0}) {
        std::complex<double> num = std::polar(1.0, 2.0 * std::numbers::pi * a) - 1.0;
        std::complex<double> expected = num / std::complex<double>{0.0, 2.0 * std::numbers::pi * a};
        CHECK(std::abs(fresnel_eval(a, 0.0) - expected) < 1e-9);
    }
    // |F(1/2, 0)| = 2/pi
    CHECK(std::abs(std::abs(fresnel_eval(0.5, 0.0)) - 2.0 / std::numbers::pi) < 1e-11);
}

TEST_CASE("fast evaluator agrees with panel quadrature across branches") {
    // covers: GL region, series region, Fresnel region, and both b signs
    for (double a : {0.0, 0.7, 12.0, 23.9, 24.1, 60.0, 333.0, 2000.0}) {
        for (double b : {0.0, 0.01, 0.49, 0.51, 3.0, 47.0, 900.0}) {
            for (double sa : {1.0, -1.0}) {
                for (double sb : {1.0, -1.0}) {
                    std::complex<double> fast = fresnel_eval(sa * a, sb * b);
                    std::complex<double> slow = fresnel_quadrature(sa * a, sb * b, 14);
                    CHECK(std::abs(fast - slow) < 5e-8);
                }
            }
        }
    }
}

TEST_CASE("conjugation symmetry F(-a,-b) = conj F(a,b)") {
    for (double a : {0.3, 5.0, 100.0})
        for (double b : {0.2, 4.0, 250.0}) {
            auto f1 = fresnel_eval(-a, -b);
            auto f2 = std::conj(fresnel_eval(a, b));
            CHECK(std::abs(f1 - f2) < 1e-12);
        }
}

TEST_CASE("fresnel table") {
    auto t = fresnel_table(2, 16);  // range 4, spacing 1/4, 33x33
    CHECK(t.n == 33);
    // center entry is F(0,0) = 1
    CHECK(std::abs(t.at(16, 16) - std::complex<double>{1.0, 0.0}) < 1e-10);
    for (int ib = 0; ib < t.n; ib += 4)
        for (int ia = 0; ia < t.n; ia += 4) {
            CHECK(std::abs(t.at(ia, ib)) <= 1.0 + 1e-9);
            CHECK(std::abs(t.at(ia, ib) - fresnel_eval(t.a_of(ia), t.b_of(ib))) < 5e-8);
        }

    CHECK_THROWS_AS(fresnel_table(4, 8), config_error);          // spacing 2 > 1/2
    CHECK_THROWS_AS(fresnel_table(8, 256, 1000), config_error);  // budget
    CHECK_THROWS_AS(fresnel_table(0, 8), invalid_spec_error);
}

TEST_CASE("weight mass matches the closed form and scales as delta^{-d}") {
    for (int d : {2, 3, 4}) {
        auto box = BoxSpec::at_scale(d, 8);
        double mass = weight_mass(box);
        double closed = weight_mass_closed_form(box);
        CHECK(std::abs(mass - closed) / closed < 1e-6);

        // exact delta^{-d} scaling along a ladder
        auto box2 = BoxSpec::at_scale(d, 16);
        double ratio = weight_mass(box2) / mass;
        double expected = std::pow(16.0 / 8.0, 2.0 * d);
        CHECK(std::abs(ratio - expected) / expected < 1e-12);
    }
}

TEST_CASE("doubling the truncation radius moves the mass below 1e-6 relative") {
    for (int d : {2, 3}) {
        auto box = BoxSpec::at_scale(d, 4);
        auto wide = BoxSpec::at_scale(d, 4, 6.0);
        double m1 = weight_mass(box);
        double m2 = weight_mass(wide);
        CHECK(std::abs(m2 - m1) / m1 < 1e-6);
    }
}

TEST_CASE("weight norm values") {
    auto box = BoxSpec::at_scale(2, 4);
    CHECK(weight_norm(box, Lp::inf()) == 1.0);
    double n2 = weight_norm(box, Lp::finite(Rational(2)));
    CHECK(std::abs(n2 * n2 - weight_mass(box)) / weight_mass(box) < 1e-12);
    CHECK_THROWS_AS(weight_norm(box, Lp::finite(Rational(1))), invalid_spec_error);

    // mass is comparable to |B| = delta^{-d} with the dimensional constant
    double c2 = weight_mass_closed_form(box) / std::pow(box.side_length, 2);
    CHECK(weight_mass(box) / std::pow(box.side_length, 2) == doctest::Approx(c2).epsilon(1e-6));
    CHECK(c2 < 1.0);  // the weight is far below 1 over most of B
    CHECK(c2 > 0.0);
}

TEST_CASE("too small a truncation radius is rejected") {
    BoxSpec box = BoxSpec::at_scale(2, 4);
    box.truncation_radius = 0.01 * box.side_length;
    CHECK_THROWS_AS(weight_mass(box), config_error);
}

TEST_CASE("pointwise weight evaluation") {
    auto box = BoxSpec::at_scale(2, 4);
    double origin[2] = {0.0, 0.0};
    CHECK(box.weight(origin) == 1.0);
    double edge[2] = {box.side_length, 0.0};
    CHECK(box.weight(edge) == doctest::Approx(std::pow(2.0, -200.0)));
}
