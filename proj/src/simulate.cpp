#include "wfq/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

namespace wfq {
namespace {

// Category probabilities F(o/m); only occupied classes contribute rows of M.
void fill_step_probs(const Occupancy& o, std::int64_t m, const LumpedMutationMatrix& M,
                     const FitnessLandscape& land, std::vector<double>& probs) {
    const int n = M.dim();
    probs.assign(static_cast<std::size_t>(n), 0.0);
    double phi = 1.0;
    const int K = land.cutoff();
    for (int h = 0; h <= std::min(K, n - 1); ++h)
        phi += static_cast<double>(o[static_cast<std::size_t>(h)]) / static_cast<double>(m) *
               (land.fitness(h) - 1.0);
    for (int h = 0; h < n; ++h) {
        const std::int64_t count = o[static_cast<std::size_t>(h)];
        if (count == 0) continue;
        const double w =
            static_cast<double>(count) / static_cast<double>(m) * land.fitness(h) / phi;
        const std::span<const double> row = M.row(h);
        for (int k = 0; k < n; ++k)
            probs[static_cast<std::size_t>(k)] += w * row[static_cast<std::size_t>(k)];
    }
}

void multinomial_draw(std::int64_t m, std::span<const double> probs, SplitMix64& rng,
                      Occupancy& out) {
    const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-9)
        throw std::runtime_error("step_occupancy: category probabilities drifted by " +
                                 std::to_string(std::abs(total - 1.0)));
    out.assign(probs.size(), 0);
    std::int64_t left = m;
    double tail = total;
    for (std::size_t k = 0; k + 1 < probs.size() && left > 0; ++k) {
        const double p = probs[k];
        tail -= p;
        if (p <= 0.0) continue;
        double ratio = tail > 0.0 ? p / (p + tail) : 1.0;
        ratio = std::clamp(ratio, 0.0, 1.0);
        std::binomial_distribution<std::int64_t> bin(left, ratio);
        const std::int64_t c = bin(rng);
        out[k] = c;
        left -= c;
    }
    if (left > 0) out.back() += left;
}

void step_into(const Occupancy& o, std::int64_t m, const LumpedMutationMatrix& M,
               const FitnessLandscape& land, SplitMix64& rng, std::vector<double>& probs,
               Occupancy& out) {
    fill_step_probs(o, m, M, land, probs);
    multinomial_draw(m, probs, rng, out);
}

std::int64_t truncated_count(const Occupancy& o, int K) {
    std::int64_t s = 0;
    for (int k = 0; k <= K && k < static_cast<int>(o.size()); ++k)
        s += o[static_cast<std::size_t>(k)];
    return s;
}

template <typename Fn>
void for_each_replica(int replicas, int threads, Fn&& fn) {
    threads = std::max(1, std::min(threads, replicas));
    if (threads == 1) {
        for (int r = 0; r < replicas; ++r) fn(r);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (int r = t; r < replicas; r += threads) fn(r);
        });
    }
    for (auto& th : pool) th.join();
}

std::uint64_t replica_stream_seed(std::uint64_t seed, int replica) {
    SplitMix64 probe = SplitMix64::for_replica(seed, static_cast<std::uint64_t>(replica));
    return probe();
}

}  // namespace

void SimulationConfig::validate() const {
    params.validate();
    if (m < 1) throw std::invalid_argument("simulation config: m must be >= 1");
    if (burn_in < 0) throw std::invalid_argument("simulation config: burn_in must be >= 0");
    if (horizon <= burn_in)
        throw std::invalid_argument("simulation config: horizon must exceed burn_in");
    if (replicas < 1) throw std::invalid_argument("simulation config: replicas must be >= 1");
    if (!start.empty()) {
        if (static_cast<int>(start.size()) != params.ell + 1)
            throw std::invalid_argument("simulation config: start must have ell+1 entries");
        std::int64_t total = 0;
        for (std::int64_t c : start) {
            if (c < 0) throw std::invalid_argument("simulation config: negative start count");
            total += c;
        }
        if (total != m)
            throw std::invalid_argument("simulation config: start counts must sum to m");
    }
}

Occupancy SimulationConfig::start_state() const {
    if (!start.empty()) return start;
    return start_all_in_class(params.ell, m, 0);
}

Occupancy start_all_in_class(int ell, int m, int cls) {
    if (cls < 0 || cls > ell)
        throw std::invalid_argument("start_all_in_class: class must lie in [0, ell]");
    Occupancy o(static_cast<std::size_t>(ell) + 1, 0);
    o[static_cast<std::size_t>(cls)] = m;
    return o;
}

Occupancy start_fixed_point(const SimulationConfig& config, int b) {
    const double a = config.params.ell * config.params.q;
    const FixedPoint fp = fixed_point_closed_form(b, a, config.landscape);
    const int K = config.landscape.cutoff();
    if (K + 1 > config.params.ell)
        throw std::invalid_argument("start_fixed_point: need ell >= K+1");
    Occupancy o(static_cast<std::size_t>(config.params.ell) + 1, 0);
    std::int64_t assigned = 0;
    std::vector<std::pair<double, int>> remainders;
    for (int k = 0; k <= K; ++k) {
        const double exact = fp.rho[static_cast<std::size_t>(k)] * config.m;
        const std::int64_t base = static_cast<std::int64_t>(std::floor(exact));
        o[static_cast<std::size_t>(k)] = base;
        assigned += base;
        remainders.emplace_back(exact - static_cast<double>(base), k);
    }
    // Largest remainders round up until rounding error is below one individual.
    std::sort(remainders.begin(), remainders.end(), [](const auto& x, const auto& y) {
        return x.first > y.first || (x.first == y.first && x.second < y.second);
    });
    double mass = 0.0;
    for (double r : fp.rho) mass += r;
    std::int64_t target = static_cast<std::int64_t>(std::llround(mass * config.m));
    for (const auto& [frac, k] : remainders) {
        if (assigned >= target) break;
        ++o[static_cast<std::size_t>(k)];
        ++assigned;
    }
    o[static_cast<std::size_t>(K) + 1] = config.m - assigned;
    return o;
}

Occupancy step_occupancy(const Occupancy& o, const LumpedMutationMatrix& M,
                         const FitnessLandscape& land, SplitMix64& rng) {
    if (static_cast<int>(o.size()) != M.dim())
        throw std::invalid_argument("step_occupancy: state must have ell+1 entries");
    const std::int64_t m = std::accumulate(o.begin(), o.end(), std::int64_t{0});
    if (m < 1) throw std::invalid_argument("step_occupancy: empty population");
    std::vector<double> probs;
    Occupancy out;
    step_into(o, m, M, land, rng, probs, out);
    return out;
}

TrajectoryStats run_trajectory(const SimulationConfig& config, int replica) {
    config.validate();
    const LumpedMutationMatrix M = LumpedMutationMatrix::build(config.params);
    const int K = config.landscape.cutoff();
    SplitMix64 rng = SplitMix64::for_replica(config.seed, static_cast<std::uint64_t>(replica));

    Occupancy state = config.start_state();
    Occupancy next;
    std::vector<double> probs;
    std::vector<double> sum(static_cast<std::size_t>(K) + 1, 0.0);
    std::vector<double> sum_sq(static_cast<std::size_t>(K) + 1, 0.0);

    for (long n = 1; n <= config.horizon; ++n) {
        step_into(state, config.m, M, config.landscape, rng, probs, next);
        state.swap(next);
        if (n > config.burn_in) {
            for (int k = 0; k <= K; ++k) {
                const double x = static_cast<double>(state[static_cast<std::size_t>(k)]) /
                                 static_cast<double>(config.m);
                sum[static_cast<std::size_t>(k)] += x;
                sum_sq[static_cast<std::size_t>(k)] += x * x;
            }
        }
    }

    TrajectoryStats stats;
    stats.steps = config.horizon - config.burn_in;
    stats.mean.resize(static_cast<std::size_t>(K) + 1);
    stats.variance.resize(static_cast<std::size_t>(K) + 1);
    const double n = static_cast<double>(stats.steps);
    for (int k = 0; k <= K; ++k) {
        const double mean = sum[static_cast<std::size_t>(k)] / n;
        stats.mean[static_cast<std::size_t>(k)] = mean;
        stats.variance[static_cast<std::size_t>(k)] =
            std::max(0.0, sum_sq[static_cast<std::size_t>(k)] / n - mean * mean);
    }
    stats.final_state = std::move(state);
    return stats;
}

HittingTimeRecord persistence_time(const SimulationConfig& config, const Occupancy& start,
                                   long cap, int replica) {
    config.validate();
    if (static_cast<int>(start.size()) != config.params.ell + 1)
        throw std::invalid_argument("persistence_time: start must have ell+1 entries");
    const int K = config.landscape.cutoff();
    HittingTimeRecord rec;
    rec.kind = HitKind::PersistenceTau0;
    rec.cap = cap;
    rec.replica = replica;
    rec.stream_seed = replica_stream_seed(config.seed, replica);

    if (truncated_count(start, K) == 0) return rec;  // tau_0 = 0

    const LumpedMutationMatrix M = LumpedMutationMatrix::build(config.params);
    SplitMix64 rng = SplitMix64::for_replica(config.seed, static_cast<std::uint64_t>(replica));
    Occupancy state = start;
    Occupancy next;
    std::vector<double> probs;
    for (long n = 1; n <= cap; ++n) {
        step_into(state, config.m, M, config.landscape, rng, probs, next);
        state.swap(next);
        if (truncated_count(state, K) == 0) {
            rec.value = n;
            return rec;
        }
    }
    rec.value = cap;
    rec.censored = true;
    return rec;
}

std::vector<HittingTimeRecord> persistence_times(const SimulationConfig& config,
                                                 const Occupancy& start, long cap, int threads) {
    std::vector<HittingTimeRecord> out(static_cast<std::size_t>(config.replicas));
    for_each_replica(config.replicas, threads, [&](int r) {
        out[static_cast<std::size_t>(r)] = persistence_time(config, start, cap, r);
    });
    return out;
}

std::vector<HittingTimeRecord> neutral_discovery(const SimulationConfig& config,
                                                 std::span<const int> ks, long cap, int replica) {
    config.validate();
    if (ks.empty()) throw std::invalid_argument("neutral_discovery: no target classes");
    std::vector<int> targets(ks.begin(), ks.end());
    std::sort(targets.begin(), targets.end());
    const int kmax = targets.back();
    if (targets.front() < 0 || kmax >= config.params.ell)
        throw std::invalid_argument("neutral_discovery: classes must lie in [0, ell-1]");

    const Occupancy start =
        config.start.empty() ? start_all_in_class(config.params.ell, config.m, config.params.ell)
                             : config.start;
    for (int k = 0; k <= kmax; ++k)
        if (start[static_cast<std::size_t>(k)] != 0)
            throw std::invalid_argument(
                "neutral_discovery: start must have no individuals in classes 0..k");

    // Neutral hypothesis: selection is inactive until the classes below K are
    // discovered, so the chain runs with fitness identically 1.
    const FitnessLandscape neutral(std::vector<double>{1.0});
    const LumpedMutationMatrix M = LumpedMutationMatrix::build(config.params);
    SplitMix64 rng = SplitMix64::for_replica(config.seed, static_cast<std::uint64_t>(replica));

    std::vector<HittingTimeRecord> recs(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) {
        recs[i].kind = HitKind::NeutralTauStar;
        recs[i].k = targets[i];
        recs[i].cap = cap;
        recs[i].replica = replica;
        recs[i].stream_seed = replica_stream_seed(config.seed, replica);
        recs[i].censored = true;
        recs[i].value = cap;
    }

    Occupancy state = start;
    Occupancy next;
    std::vector<double> probs;
    std::size_t open = targets.size();  // targets not yet hit, largest k first
    for (long n = 1; n <= cap && open > 0; ++n) {
        step_into(state, config.m, M, neutral, rng, probs, next);
        state.swap(next);
        // tau*_k is hit when any class <= k is occupied; scan once per step.
        int lowest = config.params.ell + 1;
        for (int k = 0; k <= kmax; ++k) {
            if (state[static_cast<std::size_t>(k)] > 0) {
                lowest = k;
                break;
            }
        }
        while (open > 0 && lowest <= targets[open - 1]) {
            --open;
            recs[open].value = n;
            recs[open].censored = false;
        }
    }
    return recs;
}

HittingTimeRecord neutral_hitting_time(const SimulationConfig& config, int k, long cap,
                                       int replica) {
    const int ks[1] = {k};
    return neutral_discovery(config, ks, cap, replica)[0];
}

std::vector<HittingTimeRecord> neutral_hitting_times(const SimulationConfig& config, int k,
                                                     long cap, int threads) {
    std::vector<HittingTimeRecord> out(static_cast<std::size_t>(config.replicas));
    for_each_replica(config.replicas, threads, [&](int r) {
        out[static_cast<std::size_t>(r)] = neutral_hitting_time(config, k, cap, r);
    });
    return out;
}

double master_creation_probe(const SimulationConfig& config, double gamma, double C,
                             int threads) {
    config.validate();
    const int K = config.landscape.cutoff();
    if (K + 1 > config.params.ell)
        throw std::invalid_argument("master_creation_probe: need ell >= K+1");
    if (config.m < 2)
        throw std::invalid_argument("master_creation_probe: need m >= 2");
    const long steps = std::max<long>(1, static_cast<long>(std::floor(C * std::log(config.m))));
    const std::int64_t threshold =
        static_cast<std::int64_t>(std::ceil(gamma * static_cast<double>(config.m)));

    Occupancy start(static_cast<std::size_t>(config.params.ell) + 1, 0);
    start[0] = 1;
    start[static_cast<std::size_t>(K) + 1] = config.m - 1;

    const LumpedMutationMatrix M = LumpedMutationMatrix::build(config.params);
    std::vector<int> success(static_cast<std::size_t>(config.replicas), 0);
    for_each_replica(config.replicas, threads, [&](int r) {
        SplitMix64 rng = SplitMix64::for_replica(config.seed, static_cast<std::uint64_t>(r));
        Occupancy state = start;
        Occupancy next;
        std::vector<double> probs;
        for (long n = 0; n < steps; ++n) {
            step_into(state, config.m, M, config.landscape, rng, probs, next);
            state.swap(next);
        }
        success[static_cast<std::size_t>(r)] = state[0] >= threshold ? 1 : 0;
    });
    const double hits = std::accumulate(success.begin(), success.end(), 0.0);
    return hits / static_cast<double>(config.replicas);
}

HittingTimeSummary summarize_hitting_times(std::span<const HittingTimeRecord> records) {
    HittingTimeSummary s;
    s.n = records.size();
    if (records.empty()) return s;
    double sum = 0.0;
    std::size_t uncensored = 0, censored = 0;
    for (const auto& rec : records) {
        if (rec.censored) {
            ++censored;
        } else {
            sum += static_cast<double>(rec.value);
            ++uncensored;
        }
    }
    s.censored_fraction = static_cast<double>(censored) / static_cast<double>(records.size());
    if (uncensored > 0) s.mean_uncensored = sum / static_cast<double>(uncensored);
    return s;
}

}  // namespace wfq
