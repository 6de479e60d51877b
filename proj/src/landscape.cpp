#include "wfq/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace wfq {

FitnessLandscape::FitnessLandscape(std::vector<double> values)
    : values_(std::move(values)) {
    if (values_.empty())
        throw std::invalid_argument("fitness landscape: empty value list");
    for (double v : values_) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument(
                "fitness landscape: values must be finite and strictly positive");
    }
    for (std::size_t k = 1; k < values_.size(); ++k) {
        if (!(values_[0] > values_[k]))
            throw std::invalid_argument(
                "fitness landscape: A(0) must be strictly maximal, violated at class " +
                std::to_string(k));
    }
    if (values_.size() > 1 && values_.back() == 1.0)
        throw std::invalid_argument(
            "fitness landscape: trailing entry equals 1, K is ambiguous");
}

bool IndexSet::contains(int b) const {
    return std::binary_search(indices.begin(), indices.end(), b);
}

IndexSet index_set(const FitnessLandscape& land, double a) {
    if (!(a > 0.0))
        throw std::invalid_argument("index_set: a must be positive");
    const int K = land.cutoff();
    const double decay = std::exp(-a);
    IndexSet out;
    for (int b = 0; b <= K; ++b) {
        bool dominates = true;
        for (int j = b + 1; j <= K && dominates; ++j)
            if (!(land.fitness(b) > land.fitness(j))) dominates = false;
        if (!dominates) continue;
        const double v = land.fitness(b) * decay;
        if (v > 1.0) {
            out.indices.push_back(b);
        } else if (v == 1.0) {
            out.degenerate.push_back(b);
        }
    }
    out.indices.push_back(K + 1);
    return out;
}

}  // namespace wfq
