#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wfq/mutation.hpp"

using namespace wfq;

namespace {
double binom_pmf(int n, double p, int k) {
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
                    k * std::log(p) + (n - k) * std::log1p(-p));
}
}  // namespace

TEST_CASE("mutation params validation") {
    CHECK_THROWS_AS((MutationParams{0, 2, 0.1}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((MutationParams{4, 1, 0.1}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((MutationParams{4, 2, 0.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((MutationParams{4, 2, 1.0}.validate()), std::invalid_argument);
    CHECK_NOTHROW((MutationParams{4, 2, 0.5}.validate()));
}

TEST_CASE("lumped matrix entries") {
    // ell=2, kappa=2, q=0.1: M(1,1) = P(X=Y) = q^2 + (1-q)^2 = 0.82
    MutationParams p{2, 2, 0.1};
    CHECK(lumped_entry(p, 1, 1) == doctest::Approx(0.82).epsilon(1e-12));

    // row 0 is the pure Bin(ell, q) law
    MutationParams p2{7, 3, 0.23};
    for (int l = 0; l <= 7; ++l)
        CHECK(lumped_entry(p2, 0, l) == doctest::Approx(binom_pmf(7, 0.23, l)).epsilon(1e-12));

    // q -> 0: matrix approaches the identity
    MutationParams p3{5, 2, 1e-13};
    auto M = LumpedMutationMatrix::build(p3);
    for (int k = 0; k <= 5; ++k)
        for (int l = 0; l <= 5; ++l)
            CHECK(M(k, l) == doctest::Approx(k == l ? 1.0 : 0.0).epsilon(1e-10));
}

TEST_CASE("rows are probability distributions") {
    for (MutationParams p : {MutationParams{2, 2, 0.1}, MutationParams{12, 4, 0.37},
                             MutationParams{200, 2, 0.01}}) {
        auto M = LumpedMutationMatrix::build(p);
        CHECK(M.max_row_sum_error() < 1e-12);
        for (int k = 0; k <= p.ell; ++k)
            for (int l = 0; l <= p.ell; ++l) {
                CHECK(M(k, l) >= 0.0);
                CHECK(M(k, l) <= 1.0);
            }
    }
}

TEST_CASE("limit matrix entries") {
    CHECK(limit_matrix_entry(1.0, 0, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(limit_matrix_entry(2.0, 1, 3) == doctest::Approx(2.0 * std::exp(-2.0)).epsilon(1e-12));
    CHECK(limit_matrix_entry(1.0, 5, 3) == 0.0);  // no back mutation
    CHECK_THROWS_AS(limit_matrix_entry(0.0, 0, 0), std::invalid_argument);
    // rows of the limit matrix sum to 1 (Poisson law)
    double s = 0;
    for (int j = 2; j < 60; ++j) s += limit_matrix_entry(1.7, 2, j);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("genotype oracle equals the lumped matrix") {
    CHECK(genotype_lumping_oracle(MutationParams{2, 2, 0.1}, 1, 1) ==
          doctest::Approx(0.82).epsilon(1e-12));
    CHECK(genotype_lumping_oracle(MutationParams{3, 2, 0.25}, 0, 3) ==
          doctest::Approx(0.015625).epsilon(1e-12));

    for (int ell = 1; ell <= 5; ++ell)
        for (int kappa : {2, 3, 4})
            for (double q : {0.05, 0.25, 0.5}) {
                MutationParams p{ell, kappa, q};
                auto M = LumpedMutationMatrix::build(p);
                for (int k = 0; k <= ell; ++k) {
                    auto oracle = genotype_lumping_oracle_row(p, k);
                    for (int l = 0; l <= ell; ++l)
                        CHECK(std::abs(oracle[static_cast<std::size_t>(l)] - M(k, l)) < 1e-10);
                }
            }
}

TEST_CASE("oracle guard") {
    CHECK_THROWS_AS(genotype_lumping_oracle(MutationParams{11, 2, 0.1}, 0, 0), GuardError);
    CHECK_THROWS_AS(genotype_lumping_oracle(MutationParams{4, 5, 0.1}, 0, 0), GuardError);
}

TEST_CASE("convergence to the Poisson limit") {
    // ell = 1e4, a = 1: on-demand entries, no full matrix
    MutationParams p{10000, 2, 1.0 / 10000};
    double worst = 0.0;
    for (int i = 0; i <= 5; ++i)
        for (int j = 0; j <= 5; ++j)
            worst = std::max(worst, std::abs(lumped_entry(p, i, j) - limit_matrix_entry(1, i, j)));
    CHECK(worst < 1e-2);
}

TEST_CASE("asymptotic domination M(i,j) <= M(j+1,j)") {
    MutationParams p{1000, 2, 1e-3};
    for (int j = 0; j <= 8; ++j) {
        const double bound = lumped_entry(p, j + 1, j);
        for (int i = j + 1; i <= p.ell; ++i)
            CHECK(lumped_entry(p, i, j) <= bound * (1 + 1e-12));
    }
}
