// =============================================================================
// simulate.hpp — Exact Monte Carlo of the occupancy chain.
//
// One step of the chain samples a multinomial of size m with category
// probabilities F(o/m) (conditional-binomial decomposition, O(ell) per
// step).  On top of the stepper: time-averaged trajectory statistics for the
// dichotomy observables, persistence times tau_0 (first emptying of classes
// 0..K), neutral-phase discovery times tau*_k (first entry into classes
// 0..k under neutral fitness), and the master-sequence creation probe.
//
// Replica r draws from the SplitMix64 stream derived from (seed, r), so
// replica-parallel runs are reproducible independently of scheduling.
// =============================================================================
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wfq/dynamics.hpp"
#include "wfq/landscape.hpp"
#include "wfq/mutation.hpp"
#include "wfq/rng.hpp"

namespace wfq {

using Occupancy = std::vector<std::int64_t>;

inline constexpr std::uint64_t kDefaultSeed = 123456789;

struct SimulationConfig {
    MutationParams params;
    int m = 0;
    FitnessLandscape landscape;
    std::uint64_t seed = kDefaultSeed;
    long horizon = 1;
    long burn_in = 0;
    int replicas = 1;
    Occupancy start;  // size ell+1; empty means all mass in class 0

    SimulationConfig(MutationParams p, int pop, FitnessLandscape land)
        : params(p), m(pop), landscape(std::move(land)) {}

    void validate() const;       // throws std::invalid_argument
    Occupancy start_state() const;
};

// All m individuals in one class.
Occupancy start_all_in_class(int ell, int m, int cls);

// Largest-remainder rounding of m * rho^b over classes 0..K; the leftover
// individuals go to class K+1.
Occupancy start_fixed_point(const SimulationConfig& config, int b);

// One Wright-Fisher step.  Category probabilities are renormalized when the
// drift is below 1e-9 and rejected as a hard error beyond.
Occupancy step_occupancy(const Occupancy& o, const LumpedMutationMatrix& M,
                         const FitnessLandscape& land, SplitMix64& rng);

struct TrajectoryStats {
    std::vector<double> mean;      // time averages of O_n(k)/m, k = 0..K
    std::vector<double> variance;  // matching per-class variances
    long steps = 0;                // samples averaged (horizon - burn_in)
    Occupancy final_state;
};

// Iterates the chain for `horizon` steps from config.start_state(),
// averaging the truncation over classes 0..K after `burn_in` steps.  The
// replica index selects the (seed, replica) stream.
TrajectoryStats run_trajectory(const SimulationConfig& config, int replica = 0);

enum class HitKind { PersistenceTau0, NeutralTauStar };

struct HittingTimeRecord {
    HitKind kind = HitKind::PersistenceTau0;
    int k = 0;  // target class for NeutralTauStar
    long value = 0;
    bool censored = false;
    long cap = 0;
    int replica = 0;
    std::uint64_t stream_seed = 0;
};

// tau_0: first n with classes 0..K all empty, starting from `start`.
HittingTimeRecord persistence_time(const SimulationConfig& config, const Occupancy& start,
                                   long cap, int replica = 0);
std::vector<HittingTimeRecord> persistence_times(const SimulationConfig& config,
                                                 const Occupancy& start, long cap,
                                                 int threads = 1);

// tau*_k for each k in `ks` (ascending), recorded along one shared path per
// replica.  Fitness is neutral (A == 1) regardless of config.landscape; the
// start state must contain no individual in classes 0..max(ks).
std::vector<HittingTimeRecord> neutral_discovery(const SimulationConfig& config,
                                                 std::span<const int> ks, long cap,
                                                 int replica = 0);
HittingTimeRecord neutral_hitting_time(const SimulationConfig& config, int k, long cap,
                                       int replica = 0);
std::vector<HittingTimeRecord> neutral_hitting_times(const SimulationConfig& config, int k,
                                                     long cap, int threads = 1);

// Fraction of replicas whose class-0 count reaches gamma*m within
// floor(C ln m) steps, starting from a single master sequence (one
// individual in class 0, the rest in class K+1).
double master_creation_probe(const SimulationConfig& config, double gamma, double C,
                             int threads = 1);

// Summary of hitting-time records: mean over uncensored values plus the
// censoring fraction, so censoring is never silently averaged away.
struct HittingTimeSummary {
    double mean_uncensored = 0.0;
    double censored_fraction = 0.0;
    std::size_t n = 0;
};
HittingTimeSummary summarize_hitting_times(std::span<const HittingTimeRecord> records);

}  // namespace wfq
