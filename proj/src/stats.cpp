#include "wfq/stats.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "wfq/rng.hpp"

namespace wfq {

double cramer_bernoulli(double t, double p) {
    if (!(p > 0.0) || !(p < 1.0))
        throw std::invalid_argument("cramer_bernoulli: p must lie in (0,1)");
    if (t < 0.0 || t > 1.0)
        throw std::invalid_argument("cramer_bernoulli: t must lie in [0,1]");
    double s = 0.0;
    if (t > 0.0) s += t * std::log(t / p);
    if (t < 1.0) s += (1.0 - t) * std::log((1.0 - t) / (1.0 - p));
    return std::max(s, 0.0);
}

ScalingFit fit_log_scaling(std::span<const std::pair<double, double>> points) {
    if (points.size() < 3)
        throw std::invalid_argument("fit_log_scaling: need at least 3 points");
    std::set<double> xs;
    ScalingFit fit;
    for (const auto& [x, y] : points) {
        if (!(y > 0.0)) throw std::invalid_argument("fit_log_scaling: y values must be positive");
        xs.insert(x);
        fit.points.emplace_back(x, std::log(y));
    }
    if (xs.size() != points.size())
        throw std::invalid_argument("fit_log_scaling: x values must be distinct");

    const double n = static_cast<double>(fit.points.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [x, ly] : fit.points) {
        sx += x;
        sy += ly;
        sxx += x * x;
        sxy += x * ly;
        syy += ly * ly;
    }
    const double vxx = sxx - sx * sx / n;
    const double vxy = sxy - sx * sy / n;
    const double vyy = syy - sy * sy / n;
    fit.slope = vxy / vxx;
    fit.intercept = (sy - fit.slope * sx) / n;
    fit.r_squared = vyy > 0.0 ? std::min(1.0, (vxy * vxy) / (vxx * vyy)) : 1.0;
    return fit;
}

MeanSummary summarize_mean(std::span<const double> samples) {
    MeanSummary s;
    s.n = samples.size();
    if (s.n == 0) return s;
    double sum = 0.0;
    for (double x : samples) sum += x;
    s.mean = sum / static_cast<double>(s.n);
    if (s.n > 1) {
        double ss = 0.0;
        for (double x : samples) ss += (x - s.mean) * (x - s.mean);
        s.std_error = std::sqrt(ss / (static_cast<double>(s.n) - 1.0) / static_cast<double>(s.n));
    }
    return s;
}

bool hitting_count_bound_check(int h, double lambda, double p, int trials, double escape,
                               double ret, int N, std::uint64_t seed) {
    if (h < 2) throw std::invalid_argument("hitting_count_bound_check: h must be >= 2");
    if (!(lambda > p)) throw std::invalid_argument("hitting_count_bound_check: need lambda > p");
    const double p_exact = 1.0 - std::pow(1.0 - escape, N);
    if (!(p_exact < p))
        throw std::invalid_argument(
            "hitting_count_bound_check: chain escape probability over N steps must stay below p");

    const long horizon = static_cast<long>(std::floor(h * lambda * static_cast<double>(N)));
    long hits = 0;
    for (int trial = 0; trial < trials; ++trial) {
        SplitMix64 rng = SplitMix64::for_replica(seed, static_cast<std::uint64_t>(trial));
        bool in = true;        // X_0 = in; the tracked set is {in}
        int completed = 0;     // cycles with T_i recorded
        bool waiting_exit = true;  // T*_1 = 0 since X_0 is already in the set
        // iota(horizon) >= h  <=>  T_{h-1} < horizon
        for (long n = 1; n < horizon && completed < h - 1; ++n) {
            if (in) {
                if (rng.uniform() < escape) in = false;
            } else {
                if (rng.uniform() < ret) in = true;
            }
            if (waiting_exit) {
                if (!in) {
                    ++completed;  // this step is T_{completed}
                    waiting_exit = false;
                }
            } else if (in) {
                waiting_exit = true;  // this step is T*_{completed+1}
            }
        }
        if (completed >= h - 1) ++hits;
    }

    const double freq = static_cast<double>(hits) / static_cast<double>(trials);
    const double bound = std::exp(-(h - 1) * cramer_bernoulli(lambda, p));
    const double p_hat = std::max(freq, 1.0 / static_cast<double>(trials));
    const double se = std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(trials));
    return freq <= bound + 3.0 * se;
}

}  // namespace wfq
