// =============================================================================
// ldp.hpp — Large-deviations machinery.
//
// The multinomial rate function I_K, the one-step transition cost
// V_1(r,t) = I_K(G(r), t), multi-step costs V_l by dynamic programming over a
// simplex grid, the quasipotential V(rho^0, 0) by shortest path on the grid
// with edge weight V_1, the threshold function psi(a), and the
// error/population-threshold classifier comparing alpha*psi(a) with ln kappa.
// =============================================================================
#pragma once

#include <span>
#include <vector>

#include "wfq/dynamics.hpp"
#include "wfq/errors.hpp"
#include "wfq/landscape.hpp"

namespace wfq {

// I_K(p,t) = sum_k t_k ln(t_k/p_k) + (1-|t|) ln((1-|t|)/(1-|p|)) with the
// conventions 0 ln 0 = 0 ln(0/0) = 0.  Returns +inf when t charges a zero of
// p, or when |t| < 1 while |p| = 1.
double rate_multinomial(std::span<const double> p, std::span<const double> t);

// V_1(r,t) = I_K(G(r), t); zero exactly when t = G(r).
double cost_one_step(std::span<const double> r, std::span<const double> t, double a,
                     const FitnessLandscape& land);

// Discretization of D^K: all truncated distributions whose coordinates are
// multiples of 1/resolution, plus injected exact nodes (endpoints are never
// snapped).  Lattice node count is C(resolution + K + 1, K + 1).
struct RateCostGrid {
    int K = 0;
    int resolution = 0;
    std::vector<std::vector<double>> nodes;
    std::size_t lattice_count = 0;

    static RateCostGrid build(int K, int resolution);

    // Returns the index of the node, appending it when not already present.
    int inject(std::span<const double> node);
    int find_exact(std::span<const double> node) const;
};

// V_l(r,t): minimum of sum V_1 over grid paths s^0 = r, ..., s^l = t
// (endpoints injected).  Returns +inf when every l-step path has infinite
// cost.
double cost_l_steps(std::span<const double> r, std::span<const double> t, int l,
                    const RateCostGrid& grid, double a, const FitnessLandscape& land);

struct PathCost {
    double value = 0.0;
    std::vector<std::vector<double>> path;  // from -> ... -> to
};

// Shortest V_1-path between two injected points over the complete directed
// grid graph (Dijkstra, edges evaluated on demand, +inf edges pruned by
// support tests on G).  `extra` nodes are injected alongside the endpoints.
PathCost min_cost_path(std::span<const double> from, std::span<const double> to, double a,
                       const FitnessLandscape& land, int resolution,
                       std::span<const std::vector<double>> extra = {});

struct QuasipotentialResult {
    double value = 0.0;
    std::vector<std::vector<double>> path;
    int resolution = 0;
    double a = 0.0;
    std::vector<double> fitness;  // landscape values A(0..K)
};

// V(rho^0, 0).  Requires 0 in I_A (i.e. a < ln A(0)); guarded to K <= 4.
QuasipotentialResult quasipotential(double a, const FitnessLandscape& land, int resolution);

// psi(a): the quasipotential value on ]0, ln A(0)[ and exactly 0 on
// [ln A(0), +inf[.
double psi(double a, const FitnessLandscape& land, int resolution);

// Grid resolution defaults by K (2000, 200, 40, 16, 16).
int default_resolution(int K);

enum class Phase { Supercritical, Subcritical, NearCritical };

struct Classification {
    Phase phase = Phase::Subcritical;
    double psi_value = 0.0;
    double alpha_psi = 0.0;
    double ln_kappa = 0.0;
    double margin = 0.0;
};

// Compares alpha*psi(a) with ln kappa; reports NearCritical when the gap is
// inside `margin`, since near the curve the grid error dominates.
Classification classify(double a, double alpha, int kappa, const FitnessLandscape& land,
                        int resolution, double margin = 0.02);

// Exact log multinomial coefficient ln(n! / (i_1! ... i_N!)).
double multinomial_log_coeff(std::span<const long long> counts);

// |ln C + sum i_k ln(i_k/n)| <= N ln n + 2N.
bool stirling_bound_check(std::span<const long long> counts);

}  // namespace wfq
