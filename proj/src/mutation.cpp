#include "wfq/mutation.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace wfq {
namespace {

// log C(n,x) + x ln p + (n-x) ln(1-p), stable up to n ~ 1e4 and beyond.
double log_binomial_pmf(int n, double p, int x) {
    return std::lgamma(n + 1.0) - std::lgamma(x + 1.0) - std::lgamma(n - x + 1.0) +
           x * std::log(p) + (n - x) * std::log1p(-p);
}

constexpr double kClamp = 1e-300;  // entries below this are written as 0

}  // namespace

void MutationParams::validate() const {
    if (ell < 1) throw std::invalid_argument("mutation params: ell must be >= 1");
    if (kappa < 2) throw std::invalid_argument("mutation params: kappa must be >= 2");
    if (!(q > 0.0) || !(q < 1.0))
        throw std::invalid_argument("mutation params: q must lie in (0,1)");
}

double lumped_entry(const MutationParams& params, int k, int l) {
    params.validate();
    if (k < 0 || k > params.ell || l < 0 || l > params.ell)
        throw std::invalid_argument("lumped_entry: classes must lie in [0, ell]");
    const double px = params.q / (params.kappa - 1);
    const int n_y = params.ell - k;
    // P(k - X + Y = l) = sum_x P(X=x) P(Y = l-k+x)
    double total = 0.0;
    for (int x = 0; x <= k; ++x) {
        const int y = l - k + x;
        if (y < 0 || y > n_y) continue;
        total += std::exp(log_binomial_pmf(k, px, x) + log_binomial_pmf(n_y, params.q, y));
    }
    return total < kClamp ? 0.0 : total;
}

std::vector<double> lumped_row(const MutationParams& params, int k) {
    params.validate();
    if (k < 0 || k > params.ell)
        throw std::invalid_argument("lumped_row: class must lie in [0, ell]");
    const double px = params.q / (params.kappa - 1);
    const int n_y = params.ell - k;
    // Precompute the two pmfs once; the row is their convolution shifted by k.
    std::vector<double> fx(static_cast<std::size_t>(k) + 1);
    std::vector<double> fy(static_cast<std::size_t>(n_y) + 1);
    for (int x = 0; x <= k; ++x) fx[x] = std::exp(log_binomial_pmf(k, px, x));
    for (int y = 0; y <= n_y; ++y) fy[y] = std::exp(log_binomial_pmf(n_y, params.q, y));
    std::vector<double> row(static_cast<std::size_t>(params.ell) + 1, 0.0);
    for (int x = 0; x <= k; ++x) {
        for (int y = 0; y <= n_y; ++y) {
            row[static_cast<std::size_t>(k - x + y)] += fx[x] * fy[y];
        }
    }
    for (double& v : row)
        if (v < kClamp) v = 0.0;
    return row;
}

LumpedMutationMatrix LumpedMutationMatrix::build(const MutationParams& params) {
    params.validate();
    const std::size_t dim = static_cast<std::size_t>(params.ell) + 1;
    std::vector<double> entries(dim * dim);
    for (int k = 0; k <= params.ell; ++k) {
        std::vector<double> row = lumped_row(params, k);
        std::copy(row.begin(), row.end(), entries.begin() + static_cast<std::size_t>(k) * dim);
    }
    return LumpedMutationMatrix(std::move(entries), dim, params);
}

double LumpedMutationMatrix::max_row_sum_error() const {
    double worst = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) {
        double s = 0.0;
        for (std::size_t l = 0; l < dim_; ++l) s += entries_[k * dim_ + l];
        worst = std::max(worst, std::abs(1.0 - s));
    }
    return worst;
}

double limit_matrix_entry(double a, int i, int j) {
    if (!(a > 0.0)) throw std::invalid_argument("limit_matrix_entry: a must be positive");
    if (i < 0 || j < 0)
        throw std::invalid_argument("limit_matrix_entry: indices must be nonnegative");
    if (j < i) return 0.0;  // no back mutation in the limit
    const int d = j - i;
    return std::exp(-a + d * std::log(a) - std::lgamma(d + 1.0));
}

std::vector<double> genotype_lumping_oracle_row(const MutationParams& params, int k) {
    params.validate();
    if (params.ell > 10 || params.kappa > 4)
        throw GuardError("genotype lumping oracle: state space too large (need ell <= 10, kappa <= 4)");
    if (k < 0 || k > params.ell)
        throw std::invalid_argument("genotype lumping oracle: class must lie in [0, ell]");

    const int ell = params.ell;
    const int kappa = params.kappa;
    const double base = params.q / (params.kappa - 1);

    // Reference word is all zeros; u has letter 1 in its first k sites.
    std::vector<int> u(static_cast<std::size_t>(ell), 0);
    for (int i = 0; i < k; ++i) u[i] = 1;

    // Powers of the kernel factors, so the per-genotype weight is a lookup.
    std::vector<double> weight(static_cast<std::size_t>(ell) + 1);
    for (int d = 0; d <= ell; ++d)
        weight[d] = std::pow(base, d) * std::pow(1.0 - params.q, ell - d);

    std::vector<double> row(static_cast<std::size_t>(ell) + 1, 0.0);
    std::vector<int> v(static_cast<std::size_t>(ell), 0);
    while (true) {
        int d_uv = 0, d_ref = 0;
        for (int i = 0; i < ell; ++i) {
            d_uv += (v[i] != u[i]);
            d_ref += (v[i] != 0);
        }
        row[static_cast<std::size_t>(d_ref)] += weight[static_cast<std::size_t>(d_uv)];
        // next genotype, base-kappa counter
        int pos = 0;
        while (pos < ell && ++v[pos] == kappa) v[pos++] = 0;
        if (pos == ell) break;
    }
    return row;
}

double genotype_lumping_oracle(const MutationParams& params, int k, int l) {
    if (l < 0 || l > params.ell)
        throw std::invalid_argument("genotype lumping oracle: class must lie in [0, ell]");
    return genotype_lumping_oracle_row(params, k)[static_cast<std::size_t>(l)];
}

}  // namespace wfq
