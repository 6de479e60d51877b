// =============================================================================
// mutation.hpp — Lumped mutation matrix and its Poisson limit.
//
// Per-site mutation with probability q over a genome of length ell on an
// alphabet of size kappa collapses to the Hamming-class level: row k of the
// lumped matrix is the law of  k - X + Y  with independent
// X ~ Bin(k, q/(kappa-1)) and Y ~ Bin(ell-k, q).  In the long-chain regime
// (ell -> inf, q -> 0, ell q -> a) the matrix converges to the upper
// triangular Poisson kernel  M_inf(i,j) = e^{-a} a^{j-i}/(j-i)!  with no back
// mutation.  A genotype-level brute-force oracle validates the lumping.
// =============================================================================
#pragma once

#include <span>
#include <vector>

#include "wfq/errors.hpp"

namespace wfq {

struct MutationParams {
    int ell = 1;      // genome length
    int kappa = 2;    // alphabet size
    double q = 0.0;   // per-site mutation probability, in (0,1)

    void validate() const;  // throws std::invalid_argument
};

// Single entry M_H(k,l), computed by exact convolution of the two binomial
// laws in log space.  O(min(k,l)+1) terms; usable on demand at ell ~ 1e4
// without building the full matrix.
double lumped_entry(const MutationParams& params, int k, int l);

// Full row k (length ell+1).
std::vector<double> lumped_row(const MutationParams& params, int k);

class LumpedMutationMatrix {
public:
    static LumpedMutationMatrix build(const MutationParams& params);

    double operator()(int k, int l) const {
        return entries_[static_cast<std::size_t>(k) * dim_ + static_cast<std::size_t>(l)];
    }
    std::span<const double> row(int k) const {
        return {entries_.data() + static_cast<std::size_t>(k) * dim_, dim_};
    }
    int dim() const { return static_cast<int>(dim_); }  // ell + 1
    const MutationParams& params() const { return params_; }

    // max_k |1 - sum_l M(k,l)|; construction does not renormalize, so row-sum
    // drift surfaces here instead of being hidden.
    double max_row_sum_error() const;

private:
    LumpedMutationMatrix(std::vector<double> entries, std::size_t dim, MutationParams params)
        : entries_(std::move(entries)), dim_(dim), params_(params) {}

    std::vector<double> entries_;  // row-major (ell+1) x (ell+1)
    std::size_t dim_;
    MutationParams params_;
};

// M_inf(i,j) = e^{-a} a^{j-i}/(j-i)! for j >= i, else 0.
double limit_matrix_entry(double a, int i, int j);

// Brute-force genotype-level check of the lumping: picks a genotype u at
// Hamming distance k from the reference word and sums the kernel
// M(u,v) = (q/(kappa-1))^{d(u,v)} (1-q)^{ell-d(u,v)} over all v in class l by
// explicit enumeration of the kappa^ell genotypes.  Guarded to ell <= 10,
// kappa <= 4 (throws GuardError beyond).
double genotype_lumping_oracle(const MutationParams& params, int k, int l);

// One enumeration pass gives the whole row at once; the entry version above
// slices this.
std::vector<double> genotype_lumping_oracle_row(const MutationParams& params, int k);

}  // namespace wfq
