// =============================================================================
// landscape.hpp — Class-dependent, eventually-constant fitness functions.
//
// A landscape stores the fitness values A(0..K) of the Hamming classes that
// differ from 1; every class above K has fitness 1.  The master class 0 is
// strictly fittest.  index_set() computes the viable fixed-point indices
//   I_A = { b ≤ K : A(b) e^{-a} > 1 and A(b) > A(j) for all b < j ≤ K } ∪ {K+1}.
// =============================================================================
#pragma once

#include <span>
#include <vector>

namespace wfq {

class FitnessLandscape {
public:
    // `values` are A(0), ..., A(K).  Throws std::invalid_argument when the
    // list is empty, an entry is not strictly positive, A(0) is not strictly
    // maximal, or the trailing entry equals 1 while K >= 1 (ambiguous K).
    explicit FitnessLandscape(std::vector<double> values);

    // Last class whose fitness may differ from 1.
    int cutoff() const { return static_cast<int>(values_.size()) - 1; }

    // A(k); equals 1 for every k > K.
    double fitness(int k) const {
        return (k >= 0 && k <= cutoff()) ? values_[static_cast<std::size_t>(k)] : 1.0;
    }

    const std::vector<double>& values() const { return values_; }

private:
    std::vector<double> values_;
};

// Sorted viable indices; K+1 is always the last member.  Indices b with
// A(b) e^{-a} exactly equal to 1 are excluded (strict inequality) but listed
// in `degenerate` so callers can warn: the phase classifier is degenerate
// there.
struct IndexSet {
    std::vector<int> indices;
    std::vector<int> degenerate;

    bool contains(int b) const;
    std::size_t size() const { return indices.size(); }
};

IndexSet index_set(const FitnessLandscape& land, double a);

}  // namespace wfq
