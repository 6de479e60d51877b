// =============================================================================
// dynamics.hpp — Deterministic skeleton of the occupancy process.
//
// Mean fitness phi, the finite-length selection-mutation map F on the unit
// simplex, its long-chain limit G on the truncated simplex D^K, the
// closed-form fixed points rho^b of G for each viable index b, fixed-point
// iteration, and the sandwich maps F_lower/F_upper that bracket truncations
// of F.
// =============================================================================
#pragma once

#include <span>
#include <vector>

#include "wfq/landscape.hpp"
#include "wfq/mutation.hpp"

namespace wfq {

// Validation helpers for class distributions.  A "full" vector lives on the
// unit simplex (sum = 1); a "truncated" vector lives on D^K (sum <= 1).
bool is_full_simplex(std::span<const double> x, double tol = 1e-12);
bool is_truncated_dist(std::span<const double> r, double tol = 1e-12);

// phi(r) = 1 + sum_{h<=K} r_h (A(h)-1).  Accepts either flavor; only the
// coordinates up to K enter.
double mean_fitness(std::span<const double> r, const FitnessLandscape& land);

// F_k(x) = sum_h x_h A(h) M(h,k) / phi(x) on the full simplex.  Only occupied
// classes contribute rows of M, so the cost is O(support * ell).
std::vector<double> map_F(std::span<const double> x, const LumpedMutationMatrix& M,
                          const FitnessLandscape& land);

// G_i(r) = phi(r)^{-1} sum_{h<=i} r_h A(h) e^{-a} a^{i-h}/(i-h)!  on D^K,
// i.e. F composed through the limit mutation matrix.  Input length K+1.
std::vector<double> map_G(std::span<const double> r, double a, const FitnessLandscape& land);

// Sandwich maps on D^K (finite ell): for truncations of full states,
// F_lower(pi(x)) <= pi(F(x)) coordinate-wise always, and pi(F(x)) <=
// F_upper(pi(x)) asymptotically.  Both need ell >= K+2 rows of M.
std::vector<double> map_F_lower(std::span<const double> r, const LumpedMutationMatrix& M,
                                const FitnessLandscape& land);
std::vector<double> map_F_upper(std::span<const double> r, const LumpedMutationMatrix& M,
                                const FitnessLandscape& land);

struct FixedPoint {
    int b = 0;                // index in I_A; K+1 denotes the zero solution
    std::vector<double> rho;  // length K+1, leading b zeros
    double residual = 0.0;    // ||G(rho) - rho||_1
};

// Closed-form solution rho^b for b in index_set(land, a).  The per-coordinate
// weights are the literal chain sums over index chains 0 = i_0 < ... < i_h = k
// within {1, ..., K-b}; the normalization pins the mean fitness at the fixed
// point to A(b) e^{-a}.  Throws std::domain_error when b is not viable and
// GuardError when K > 16 (chain enumeration is exponential in K-b).
FixedPoint fixed_point_closed_form(int b, double a, const FitnessLandscape& land);

// All fixed points, one per member of I_A, ascending in b.
std::vector<FixedPoint> all_fixed_points(double a, const FitnessLandscape& land);

struct IterationResult {
    std::vector<double> limit;
    long iters = 0;
    bool converged = false;  // false means max_iter hit before the tolerance
};

IterationResult iterate_to_fixed_point(std::vector<double> r0, double a,
                                       const FitnessLandscape& land, double tol = 1e-12,
                                       long max_iter = 1000000);

}  // namespace wfq
