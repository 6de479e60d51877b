#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "wfq/ldp.hpp"
#include "wfq/rng.hpp"

using namespace wfq;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> random_truncated(SplitMix64& rng, int n) {
    std::vector<double> r(static_cast<std::size_t>(n));
    double left = 1.0;
    for (auto& v : r) {
        v = rng.uniform() * left * 0.7;
        left -= v;
    }
    return r;
}

}  // namespace

TEST_CASE("multinomial rate function") {
    SUBCASE("identical distributions cost nothing") {
        std::vector<double> p{0.2, 0.3, 0.1};
        CHECK(rate_multinomial(p, p) == 0.0);
    }
    SUBCASE("scalar example") {
        CHECK(rate_multinomial(std::vector<double>{0.25}, std::vector<double>{0.75}) ==
              doctest::Approx(0.75 * std::log(3.0) + 0.25 * std::log(1.0 / 3.0))
                  .epsilon(1e-12));
    }
    SUBCASE("absolute continuity failures") {
        CHECK(rate_multinomial(std::vector<double>{0.0, 0.5}, std::vector<double>{0.5, 0.25}) ==
              kInf);
        // |t| < 1 while |p| = 1
        CHECK(rate_multinomial(std::vector<double>{1.0}, std::vector<double>{0.5}) == kInf);
    }
    SUBCASE("invalid inputs") {
        CHECK_THROWS_AS(rate_multinomial(std::vector<double>{0.7, 0.7}, std::vector<double>{0.5, 0.25}),
                        std::invalid_argument);
        CHECK_THROWS_AS(rate_multinomial(std::vector<double>{0.5}, std::vector<double>{0.5, 0.25}),
                        std::invalid_argument);
    }
    SUBCASE("nonnegative, zero only at equality") {
        SplitMix64 rng(9);
        for (int trial = 0; trial < 500; ++trial) {
            auto p = random_truncated(rng, 3);
            auto t = random_truncated(rng, 3);
            const double v = rate_multinomial(p, t);
            CHECK(v >= 0.0);
            if (v == 0.0)
                for (int i = 0; i < 3; ++i) CHECK(p[static_cast<std::size_t>(i)] ==
                                                  doctest::Approx(t[static_cast<std::size_t>(i)]));
        }
    }
}

TEST_CASE("one-step cost V_1") {
    FitnessLandscape land({5, 2, 4});

    SUBCASE("V_1(r, G(r)) = 0 and V_1(r, t) > 0 otherwise") {
        SplitMix64 rng(10);
        for (int trial = 0; trial < 1000; ++trial) {
            auto r = random_truncated(rng, 3);
            auto g = map_G(r, 1.0, land);
            CHECK(cost_one_step(r, g, 1.0, land) <= 1e-12);
            auto t = g;  // shrunk copy stays in D^K and differs from G(r)
            for (auto& v : t) v *= 0.5;
            CHECK(cost_one_step(r, t, 1.0, land) > 0.0);
        }
    }

    SUBCASE("extinction charges nothing reachable") {
        CHECK(cost_one_step(std::vector<double>{0, 0, 0}, std::vector<double>{0.1, 0, 0}, 1.0,
                            land) == kInf);
        CHECK(cost_one_step(std::vector<double>{0, 0, 0}, std::vector<double>{0, 0, 0}, 1.0,
                            land) == 0.0);
    }

    SUBCASE("sharp peak one-jump cost") {
        FitnessLandscape sharp({4});
        const double a = std::log(2.0);
        auto fp = fixed_point_closed_form(0, a, sharp);
        CHECK(cost_one_step(fp.rho, std::vector<double>{0.0}, a, sharp) ==
              doctest::Approx(std::log(1.5)).epsilon(1e-12));
    }
}

TEST_CASE("grid construction") {
    auto grid = RateCostGrid::build(1, 10);
    // C(10 + 2, 2) = 66 lattice nodes
    CHECK(grid.nodes.size() == 66);
    CHECK(grid.lattice_count == 66);
    const int idx = grid.inject(std::vector<double>{0.05, 0.15});
    CHECK(idx == 66);
    CHECK(grid.inject(std::vector<double>{0.05, 0.15}) == 66);  // dedupe
    CHECK(grid.inject(std::vector<double>{0.1, 0.2}) >= 0);     // lattice point, no growth
    CHECK(grid.nodes.size() == 67);
    CHECK_THROWS_AS(RateCostGrid::build(4, 2000), GuardError);
}

TEST_CASE("multi-step cost V_l") {
    FitnessLandscape sharp({4});
    const double a = std::log(2.0);
    auto grid = RateCostGrid::build(0, 50);

    SUBCASE("l = 1 collapses to the one-step cost") {
        std::vector<double> r{0.3}, t{0.1};
        CHECK(cost_l_steps(r, t, 1, grid, a, sharp) ==
              doctest::Approx(cost_one_step(r, t, a, sharp)).epsilon(1e-12));
    }

    SUBCASE("following the orbit is asymptotically free") {
        std::vector<double> r{0.3};
        auto g2 = map_G(map_G(r, a, sharp), a, sharp);
        // snap to the fine grid
        auto fine = RateCostGrid::build(0, 400);
        std::vector<double> snapped{std::round(g2[0] * 400) / 400};
        CHECK(cost_l_steps(r, snapped, 2, fine, a, sharp) < 1e-3);
    }

    SUBCASE("path concatenation subadditivity") {
        std::vector<double> r{0.3}, t{0.15};
        const double v2 = cost_l_steps(r, t, 2, grid, a, sharp);
        const double v3 = cost_l_steps(r, t, 3, grid, a, sharp);
        const double self = cost_one_step(t, t, a, sharp);
        CHECK(v3 <= v2 + self + 1e-12);
    }
}

TEST_CASE("quasipotential") {
    FitnessLandscape sharp({4});
    const double a = std::log(2.0);

    SUBCASE("refused when rho^0 does not exist") {
        CHECK_THROWS_AS(quasipotential(std::log(4.0) + 0.1, sharp, 100), std::domain_error);
    }

    SUBCASE("guarded for large K") {
        std::vector<double> values{9, 5, 4, 3, 2.5, 2};
        FitnessLandscape wide(values);
        CHECK_THROWS_AS(quasipotential(0.1, wide, 4), GuardError);
    }

    SUBCASE("one-jump upper bound and refinement monotonicity") {
        double prev = kInf;
        for (int res : {250, 500, 1000}) {
            auto qp = quasipotential(a, sharp, res);
            CHECK(qp.value > 0.0);
            CHECK(qp.value <= std::log(1.5) + 1e-12);
            CHECK(qp.value <= prev + 1e-6);
            prev = qp.value;
            CHECK(qp.path.front()[0] ==
                  doctest::Approx(fixed_point_closed_form(0, a, sharp).rho[0]));
            CHECK(qp.path.back()[0] == 0.0);
        }
    }

    SUBCASE("reported value equals the path cost sum") {
        auto qp = quasipotential(a, sharp, 500);
        double total = 0;
        for (std::size_t i = 0; i + 1 < qp.path.size(); ++i)
            total += cost_one_step(qp.path[i], qp.path[i + 1], a, sharp);
        CHECK(std::abs(total - qp.value) < 1e-9);
    }

    SUBCASE("triangle inequality through an intermediate fixed point") {
        FitnessLandscape land({5, 2, 4});
        auto rho0 = fixed_point_closed_form(0, 1.0, land);
        auto rho2 = fixed_point_closed_form(2, 1.0, land);
        const std::vector<double> zero{0, 0, 0};
        const int res = 16;
        const double direct = quasipotential(1.0, land, res).value;
        const double leg1 = min_cost_path(rho0.rho, rho2.rho, 1.0, land, res).value;
        const double leg2 = min_cost_path(rho2.rho, zero, 1.0, land, res).value;
        CHECK(direct <= leg1 + leg2 + 1e-12);
    }
}

TEST_CASE("psi and the classifier") {
    FitnessLandscape sharp({4});

    SUBCASE("psi vanishes at and beyond ln A(0), exactly") {
        CHECK(psi(std::log(4.0), sharp, 50) == 0.0);
        CHECK(psi(std::log(4.0) + 0.1, sharp, 50) == 0.0);
        CHECK(psi(10.0, sharp, 50) == 0.0);
    }

    SUBCASE("psi grows as a drops") {
        CHECK(psi(0.05, sharp, 400) > psi(0.5, sharp, 400));
    }

    SUBCASE("classifier phases") {
        auto sup = classify(std::log(2.0), 50.0, 2, sharp, 400);
        CHECK(sup.phase == Phase::Supercritical);
        CHECK(sup.psi_value >= 0.2);

        auto sub = classify(std::log(2.0), 0.001, 2, sharp, 400);
        CHECK(sub.phase == Phase::Subcritical);

        auto trivially_sub = classify(std::log(4.0) + 0.1, 100.0, 2, sharp, 50);
        CHECK(trivially_sub.phase == Phase::Subcritical);
        CHECK(trivially_sub.psi_value == 0.0);

        // alpha tuned so alpha*psi sits inside the NearCritical band
        const double p = psi(std::log(2.0), sharp, 400);
        auto near = classify(std::log(2.0), std::log(2.0) / p, 2, sharp, 400);
        CHECK(near.phase == Phase::NearCritical);
    }

    SUBCASE("default resolutions") {
        CHECK(default_resolution(0) == 2000);
        CHECK(default_resolution(1) == 200);
        CHECK(default_resolution(2) == 40);
        CHECK(default_resolution(3) == 16);
        CHECK(default_resolution(4) == 16);
    }
}

TEST_CASE("multinomial log coefficient and the Stirling bound") {
    SUBCASE("single block") {
        const long long counts[] = {7};
        CHECK(multinomial_log_coeff(counts) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(stirling_bound_check(counts));
    }
    SUBCASE("two equal blocks") {
        const long long counts[] = {3, 3};
        CHECK(multinomial_log_coeff(counts) == doctest::Approx(std::log(20.0)).epsilon(1e-12));
        CHECK(stirling_bound_check(counts));
    }
    SUBCASE("random sweep") {
        SplitMix64 rng(11);
        for (int trial = 0; trial < 10000; ++trial) {
            const int blocks = 1 + static_cast<int>(rng() % 10);
            std::vector<long long> counts(static_cast<std::size_t>(blocks));
            long long total = 0;
            for (auto& c : counts) {
                c = static_cast<long long>(rng() % 1000);
                total += c;
            }
            if (total == 0) counts[0] = 1;
            CHECK(stirling_bound_check(counts));
        }
    }
}
