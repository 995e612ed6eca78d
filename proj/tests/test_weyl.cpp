#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "decoupling/weyl.hpp"
#include "oracles.hpp"

using namespace decoupling;

namespace {

double rel_err(double a, double b) {
    double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

Lp lp(std::int64_t n, std::int64_t d = 1) { return Lp::finite(Rational(n, d)); }

} // namespace

TEST_CASE("fft agrees with the naive DFT at mixed lengths") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t n : {1u, 3u, 8u, 17u, 65u, 129u, 514u}) {
        Fft plan(n);
        Fft::Workspace ws;
        for (int sign : {-1, 1}) {
            std::vector<std::complex<double>> x(n), ref(n);
            for (auto& z : x) z = {u(rng), u(rng)};
            for (std::size_t a = 0; a < n; ++a) {
                std::complex<double> s{0, 0};
                for (std::size_t j = 0; j < n; ++j) {
                    double ang = sign * 2.0 * std::numbers::pi *
                                 static_cast<double>((a * j) % n) / static_cast<double>(n);
                    s += x[j] * std::complex<double>{std::cos(ang), std::sin(ang)};
                }
                ref[a] = s;
            }
            plan.transform(x.data(), sign, ws);
            for (std::size_t a = 0; a < n; ++a)
                CHECK(std::abs(x[a] - ref[a]) <= 1e-12 * std::sqrt(static_cast<double>(n)));
        }
    }
}

TEST_CASE("grid evaluation basics") {
    GridSpec g{2, 2};

    auto one = eval_weyl_grid(WeylSumSpec::make(1), g);
    for (const auto& z : one.values) CHECK(std::abs(std::abs(z) - 1.0) < 1e-13);

    for (int M : {1, 3, 7}) {
        auto grid = eval_weyl_grid(WeylSumSpec::make(M), g);
        CHECK(rel_err(grid.at(0, 0).real(), M) < 1e-13);
        CHECK(std::abs(grid.at(0, 0).imag()) < 1e-12);
    }

    // M=2: f(1/2, 0) = e(1/2) + e(1) = 0; x = 1/2 sits at column X/2
    auto two = eval_weyl_grid(WeylSumSpec::make(2), g);
    CHECK(std::abs(two.at(two.X / 2, 0)) < 1e-13);
}

TEST_CASE("grid guards") {
    CHECK_THROWS_AS(eval_weyl_grid(WeylSumSpec::make(64), GridSpec{2, 2}, 1000),
                    resource_error);
    CHECK_THROWS_AS(eval_weyl_grid(WeylSumSpec::make(2), GridSpec{1, 2}), invalid_spec_error);
    CHECK_THROWS_AS(WeylSumSpec::make(0), invalid_spec_error);
    CHECK_THROWS_AS(moment_2d(WeylSumSpec::make(2), lp(3, 2), GridSpec{2, 2}),
                    invalid_spec_error);
    GridSpec tiny{2, 2, 100};
    CHECK_THROWS_AS(moment_2d(WeylSumSpec::make(8), lp(2), tiny), resource_error);
}

TEST_CASE("second moment is M by orthogonality") {
    for (int M : {1, 2, 3, 5, 8, 16, 37}) {
        auto s = moment_2d(WeylSumSpec::make(M), lp(2), GridSpec{2, 2});
        CHECK(rel_err(s.value * s.value, M) < 1e-12);
    }
    CHECK(second_moment_exact(7) == 7);
    CHECK(second_moment_exact(64) == 64);
}

TEST_CASE("fourth moment count oracle") {
    CHECK(fourth_moment_count(1) == 1);
    CHECK(fourth_moment_count(4) == 28);
    CHECK(fourth_moment_count(10) == 190);
    // the symmetric functions determine the unordered pair, so 2M^2 - M
    for (int M = 1; M <= 12; ++M)
        CHECK(fourth_moment_count(M) == 2 * static_cast<std::int64_t>(M) * M - M);
    CHECK_THROWS_AS(fourth_moment_count(65), resource_error);
}

TEST_CASE("fourth moment matches the enumeration exactly") {
    for (int M : {2, 4, 9, 16}) {
        auto s = moment_2d(WeylSumSpec::make(M), lp(4), GridSpec{4, 4});
        CHECK(rel_err(std::pow(s.value, 4.0), static_cast<double>(fourth_moment_count(M))) <
              1e-10);
    }
}

TEST_CASE("bandlimited quadrature is exact for higher even moments") {
    for (int M : {2, 4, 8}) {
        auto s6 = moment_2d(WeylSumSpec::make(M), lp(6), GridSpec{2, 2});
        CHECK(rel_err(std::pow(s6.value, 6.0),
                      static_cast<double>(oracles::even_weyl_moment(M, 3))) < 1e-10);
    }
    for (int M : {4, 8}) {
        auto s10 = moment_2d(WeylSumSpec::make(M), lp(10), GridSpec{3, 3});
        CHECK(rel_err(std::pow(s10.value, 10.0),
                      static_cast<double>(oracles::even_weyl_moment(M, 5))) < 1e-9);
    }
}

TEST_CASE("exactness predicate follows the bandwidth inequality") {
    auto spec = WeylSumSpec::make(8);
    CHECK(grid_is_exact_for(spec, GridSpec{2, 2}, lp(2)));
    CHECK(grid_is_exact_for(spec, GridSpec{2, 2}, lp(4)));
    CHECK(grid_is_exact_for(spec, GridSpec{3, 3}, lp(10)));
    CHECK_FALSE(grid_is_exact_for(spec, GridSpec{2, 2}, lp(10)));
    CHECK_FALSE(grid_is_exact_for(spec, GridSpec{4, 4}, lp(3)));
    CHECK_FALSE(grid_is_exact_for(spec, GridSpec{4, 4}, Lp::inf()));
}

TEST_CASE("M=1 has unit norms for every p") {
    for (auto p : {lp(2), lp(7, 2), lp(13)}) {
        auto s = moment_2d(WeylSumSpec::make(1), p, GridSpec{2, 2});
        CHECK(rel_err(s.value, 1.0) < 1e-13);
    }
    auto sup = moment_2d(WeylSumSpec::make(1), Lp::inf(), GridSpec{2, 2});
    CHECK(rel_err(sup.value, 1.0) < 1e-13);
}

TEST_CASE("norms are nondecreasing in p on the probability torus") {
    auto spec = WeylSumSpec::make(6);
    GridSpec g{4, 4};
    double prev = 0.0;
    for (auto p : {lp(2), lp(3), lp(4), lp(6), lp(8)}) {
        double v = moment_2d(spec, p, g).value;
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
    CHECK(moment_2d(spec, Lp::inf(), g).value >= prev - 1e-12);
}

TEST_CASE("two-grid error estimate bounds the next refinement") {
    // p = 3 is not bandlimited, so the Riemann sum genuinely converges
    auto spec = WeylSumSpec::make(8);
    auto with_err = moment_2d(spec, lp(3), GridSpec{2, 2}, true);
    CHECK(with_err.err_estimate > 0.0);
    double v4 = moment_2d(spec, lp(3), GridSpec{4, 4}).value;
    double v8 = moment_2d(spec, lp(3), GridSpec{8, 8}).value;
    CHECK(std::abs(v4 - v8) < std::max(with_err.err_estimate, 1e-14));
}

TEST_CASE("S_p profile") {
    auto spec = WeylSumSpec::make(3);
    int G = 2 * (2 * 9 + 1);  // even, covers [-1,1) above bandwidth

    SUBCASE("p=2 is constant 2M") {
        auto prof = sp_profile(spec, lp(2), G, 2);
        for (double v : prof.values) CHECK(rel_err(v, 6.0) < 1e-12);
    }

    SUBCASE("M=1 profile is constant 2") {
        auto one = sp_profile(WeylSumSpec::make(1), lp(4), 4, 2);
        for (double v : one.values) CHECK(rel_err(v, 2.0) < 1e-12);
    }

    SUBCASE("conjugation symmetry S_p(x) = S_p(-x)") {
        auto prof = sp_profile(spec, lp(4), G, 4);
        for (int i = 1; i < G / 2; ++i)
            CHECK(rel_err(prof.values[i], prof.values[G - i]) < 1e-11);
    }

    SUBCASE("S_4(0) equals the Dirichlet-kernel fourth moment") {
        for (int M : {3, 5, 8}) {
            int Gm = 2 * (2 * M * M + 1);
            auto prof = sp_profile(WeylSumSpec::make(M), lp(4), Gm, 4);
            double s4_at_0 = prof.values[Gm / 2];  // node x_d = 0
            CHECK(rel_err(s4_at_0, dirichlet_moment(M, lp(4))) < 1e-11);
            CHECK(rel_err(s4_at_0,
                          2.0 * oracles::even_dirichlet_moment(M, 2)) < 1e-11);
        }
    }

    SUBCASE("profile mean reproduces the 2d moment at p = 2 and 4") {
        for (auto p : {lp(2), lp(4)}) {
            int s = p.rational().num() == 4 ? 2 : 1;
            int Gm = 2 * s * (2 * 9 + 1);
            auto prof = sp_profile(spec, p, Gm, 2 * s);
            double mean = prof.integral_of_power(1) / 2.0;
            double mom = moment_2d(spec, p, GridSpec{2, 2}).value;
            CHECK(rel_err(mean, 2.0 * std::pow(mom, p.value())) < 1e-11);
        }
    }

    SUBCASE("guards") {
        CHECK_THROWS_AS(sp_profile(spec, lp(4), 5, 2), invalid_spec_error);
        CHECK_THROWS_AS(sp_profile(spec, Lp::inf(), G, 2), invalid_spec_error);
        CHECK_THROWS_AS(sp_profile(spec, lp(4), G, 2, 100), resource_error);
    }
}

TEST_CASE("Dirichlet-kernel moments") {
    CHECK(rel_err(dirichlet_moment(1, lp(2)), 2.0) < 1e-13);
    CHECK(rel_err(dirichlet_moment(1, lp(9)), 2.0) < 1e-13);
    CHECK(rel_err(dirichlet_moment(3, lp(2)), 6.0) < 1e-12);
    CHECK(rel_err(dirichlet_moment(8, lp(4)), 2.0 * 344.0) < 1e-12);
    for (int M : {2, 5, 9})
        CHECK(rel_err(dirichlet_moment(M, lp(6)),
                      2.0 * oracles::even_dirichlet_moment(M, 3)) < 1e-11);
    CHECK_THROWS_AS(dirichlet_moment(3, Lp::inf()), invalid_spec_error);
}

TEST_CASE("normalized sixth moments grow") {
    auto table = sixth_moment_log_check({1, 2});
    CHECK(rel_err(table[0].second, 1.0) < 1e-12);
    CHECK(rel_err(table[1].second, 20.0 / 8.0) < 1e-11);

    auto ladder = sixth_moment_log_check({8, 16, 32});
    for (std::size_t i = 1; i < ladder.size(); ++i)
        CHECK(ladder[i].second > ladder[i - 1].second);

    CHECK_THROWS_AS(sixth_moment_log_check({8, 8}), invalid_spec_error);
}

TEST_CASE("moment csv serialization") {
    std::vector<MomentSample> rows = {
        {4, lp(2), 2.0, 0.0},
        {8, Lp::inf(), 8.0, 1e-3},
    };
    std::ostringstream os;
    write_moment_csv(os, "moment", rows);
    std::string text = os.str();
    CHECK(text.find("kind,M,p_num,p_den,value,err\n") == 0);
    CHECK(text.find("moment,4,2,1,2,0\n") != std::string::npos);
    CHECK(text.find("moment,8,1,0,8,0.001\n") != std::string::npos);
}
