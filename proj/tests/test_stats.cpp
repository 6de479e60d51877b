#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wfq/ldp.hpp"
#include "wfq/stats.hpp"

using namespace wfq;

TEST_CASE("Bernoulli Cramer transform") {
    CHECK(cramer_bernoulli(0.3, 0.3) == 0.0);
    CHECK(cramer_bernoulli(1.0, 0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(cramer_bernoulli(0.75, 0.25) ==
          doctest::Approx(0.75 * std::log(3.0) + 0.25 * std::log(1.0 / 3.0)).epsilon(1e-12));
    CHECK(cramer_bernoulli(0.0, 0.25) == doctest::Approx(std::log(4.0 / 3.0)).epsilon(1e-12));
    CHECK_THROWS_AS(cramer_bernoulli(0.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(cramer_bernoulli(0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(cramer_bernoulli(1.5, 0.5), std::invalid_argument);
}

TEST_CASE("Cramer transform properties") {
    SUBCASE("nonnegative, zero only at t = p") {
        for (double p : {0.1, 0.4, 0.9})
            for (int i = 0; i <= 20; ++i) {
                const double t = i / 20.0;
                const double v = cramer_bernoulli(t, p);
                CHECK(v >= 0.0);
                if (t != p) CHECK(v > 0.0);
            }
    }
    SUBCASE("convex in t (midpoint inequality)") {
        const double p = 0.35;
        for (int i = 0; i <= 18; ++i) {
            const double t1 = i / 20.0, t2 = (i + 2) / 20.0;
            CHECK(cramer_bernoulli((t1 + t2) / 2, p) <=
                  0.5 * (cramer_bernoulli(t1, p) + cramer_bernoulli(t2, p)) + 1e-12);
        }
    }
    SUBCASE("matches the K=0 multinomial rate function") {
        for (double p = 0.02; p < 1.0; p += 0.04)
            for (double t = 0.0; t <= 1.0; t += 0.05) {
                CHECK(std::abs(cramer_bernoulli(t, p) -
                               rate_multinomial(std::vector<double>{p},
                                                std::vector<double>{t})) < 1e-12);
            }
    }
}

TEST_CASE("log scaling fits") {
    SUBCASE("exact exponential") {
        std::vector<std::pair<double, double>> pts;
        for (double x : {1.0, 2.0, 3.0, 4.0}) pts.emplace_back(x, std::exp(2.0 * x));
        auto fit = fit_log_scaling(pts);
        CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("constant y gives slope 0") {
        std::vector<std::pair<double, double>> pts{{1, 5.5}, {2, 5.5}, {3, 5.5}};
        CHECK(fit_log_scaling(pts).slope == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("slope invariant under positive rescaling of y") {
        std::vector<std::pair<double, double>> pts{{1, 2.0}, {2, 3.1}, {3, 9.7}, {5, 11.0}};
        auto base = fit_log_scaling(pts);
        for (auto& [x, y] : pts) y *= 37.5;
        auto scaled = fit_log_scaling(pts);
        CHECK(std::abs(base.slope - scaled.slope) < 1e-12);
    }
    SUBCASE("input validation") {
        std::vector<std::pair<double, double>> two{{1, 2.0}, {2, 3.0}};
        CHECK_THROWS_AS(fit_log_scaling(two), std::invalid_argument);
        std::vector<std::pair<double, double>> dup{{1, 2.0}, {1, 3.0}, {2, 4.0}};
        CHECK_THROWS_AS(fit_log_scaling(dup), std::invalid_argument);
        std::vector<std::pair<double, double>> neg{{1, 2.0}, {2, -3.0}, {3, 4.0}};
        CHECK_THROWS_AS(fit_log_scaling(neg), std::invalid_argument);
    }
}

TEST_CASE("mean summaries") {
    std::vector<double> xs{1, 2, 3, 4};
    auto s = summarize_mean(xs);
    CHECK(s.mean == doctest::Approx(2.5));
    CHECK(s.n == 4);
    CHECK(s.std_error == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)).epsilon(1e-12));
}

TEST_CASE("hitting-count bound on the two-state chain") {
    SUBCASE("lambda = 1, N = 1: cycles cannot beat their minimum length") {
        // escape over N=1 steps is 0.01 < p = 0.02
        CHECK(hitting_count_bound_check(5, 1.0, 0.02, 2000, 0.01, 0.5, 1, 7));
    }
    SUBCASE("h = 5, lambda = 0.6, p = 0.3") {
        // escape over N=6 steps: 1 - 0.95^6 = 0.265 < 0.3
        CHECK(hitting_count_bound_check(5, 0.6, 0.3, 10000, 0.05, 0.5, 6, 7));
    }
    SUBCASE("h = 2 single-exponent case") {
        CHECK(hitting_count_bound_check(2, 0.6, 0.3, 10000, 0.05, 0.5, 6, 7));
    }
    SUBCASE("argument validation") {
        CHECK_THROWS_AS(hitting_count_bound_check(1, 0.6, 0.3, 10, 0.05, 0.5, 6, 7),
                        std::invalid_argument);
        CHECK_THROWS_AS(hitting_count_bound_check(5, 0.2, 0.3, 10, 0.05, 0.5, 6, 7),
                        std::invalid_argument);
        // escape probability over N steps exceeds p
        CHECK_THROWS_AS(hitting_count_bound_check(5, 0.6, 0.1, 10, 0.05, 0.5, 6, 7),
                        std::invalid_argument);
    }
}
