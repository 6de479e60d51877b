// =============================================================================
// stats.hpp — Shared statistical utilities.
//
// Bernoulli Cramér transform, least-squares fits of exponential scalings
// (used to compare Monte Carlo hitting-time exponents against ln kappa and
// psi(a)), mean/CI summaries, and the empirical check of the hitting-count
// bound P(iota(h lambda N) >= h) < e^{-(h-1) Lambda*(lambda)} on a synthetic
// two-state chain with analytically known escape probability.
// =============================================================================
#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace wfq {

// Lambda*(t) = t ln(t/p) + (1-t) ln((1-t)/(1-p)), with 0 ln 0 = 0.
double cramer_bernoulli(double t, double p);

struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::vector<std::pair<double, double>> points;  // (x, ln y) pairs used
};

// Least squares of ln y on x.  Needs >= 3 points with distinct x and y > 0.
ScalingFit fit_log_scaling(std::span<const std::pair<double, double>> points);

struct MeanSummary {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
};

MeanSummary summarize_mean(std::span<const double> samples);

// Empirical verification of the hitting-count bound on a two-state chain
// (states {in, out}; the tracked set and the containing set both equal
// {in}).  The chain escapes per step with probability `escape` and returns
// with probability `ret`; the escape probability over N steps is then
// exactly 1 - (1-escape)^N, which must stay below p.  Runs `trials`
// simulations of h*lambda*N steps each and checks that the frequency of
// {iota(h lambda N) >= h} is at most e^{-(h-1) Lambda*_p(lambda)} plus three
// standard errors.
bool hitting_count_bound_check(int h, double lambda, double p, int trials, double escape,
                               double ret, int N, std::uint64_t seed);

}  // namespace wfq
