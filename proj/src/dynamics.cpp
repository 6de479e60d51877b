#include "wfq/dynamics.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace wfq {
namespace {

double l1_sum(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0);
}

bool nonnegative(std::span<const double> v, double tol) {
    for (double x : v)
        if (x < -tol || !std::isfinite(x)) return false;
    return true;
}

double l1_diff(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s;
}

}  // namespace

bool is_full_simplex(std::span<const double> x, double tol) {
    return !x.empty() && nonnegative(x, tol) && std::abs(l1_sum(x) - 1.0) <= tol;
}

bool is_truncated_dist(std::span<const double> r, double tol) {
    return !r.empty() && nonnegative(r, tol) && l1_sum(r) <= 1.0 + tol;
}

double mean_fitness(std::span<const double> r, const FitnessLandscape& land) {
    const int K = land.cutoff();
    const int top = std::min<int>(K, static_cast<int>(r.size()) - 1);
    double phi = 1.0;
    for (int h = 0; h <= top; ++h) phi += r[static_cast<std::size_t>(h)] * (land.fitness(h) - 1.0);
    return phi;
}

std::vector<double> map_F(std::span<const double> x, const LumpedMutationMatrix& M,
                          const FitnessLandscape& land) {
    const int n = M.dim();
    if (static_cast<int>(x.size()) != n)
        throw std::invalid_argument("map_F: state length must equal ell+1 = " + std::to_string(n));
    const double phi = mean_fitness(x, land);
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    for (int h = 0; h < n; ++h) {
        const double xh = x[static_cast<std::size_t>(h)];
        if (xh == 0.0) continue;
        const double w = xh * land.fitness(h) / phi;
        const std::span<const double> row = M.row(h);
        for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] += w * row[static_cast<std::size_t>(k)];
    }
    return out;
}

std::vector<double> map_G(std::span<const double> r, double a, const FitnessLandscape& land) {
    const int K = land.cutoff();
    if (static_cast<int>(r.size()) != K + 1)
        throw std::invalid_argument("map_G: state length must equal K+1 = " + std::to_string(K + 1));
    const double phi = mean_fitness(r, land);
    std::vector<double> out(static_cast<std::size_t>(K) + 1, 0.0);
    for (int h = 0; h <= K; ++h) {
        const double rh = r[static_cast<std::size_t>(h)];
        if (rh == 0.0) continue;
        const double w = rh * land.fitness(h) / phi;
        for (int i = h; i <= K; ++i)
            out[static_cast<std::size_t>(i)] += w * limit_matrix_entry(a, h, i);
    }
    return out;
}

std::vector<double> map_F_lower(std::span<const double> r, const LumpedMutationMatrix& M,
                                const FitnessLandscape& land) {
    const int K = land.cutoff();
    if (static_cast<int>(r.size()) != K + 1)
        throw std::invalid_argument("map_F_lower: state length must equal K+1");
    if (M.dim() < K + 2)
        throw std::invalid_argument("map_F_lower: mutation matrix needs ell >= K+1");
    const double phi = mean_fitness(r, land);
    std::vector<double> out(static_cast<std::size_t>(K) + 1, 0.0);
    for (int k = 0; k <= K; ++k) {
        double s = 0.0;
        for (int i = 0; i <= K; ++i)
            s += r[static_cast<std::size_t>(i)] * land.fitness(i) * M(i, k);
        out[static_cast<std::size_t>(k)] = s / phi;
    }
    return out;
}

std::vector<double> map_F_upper(std::span<const double> r, const LumpedMutationMatrix& M,
                                const FitnessLandscape& land) {
    const int K = land.cutoff();
    if (static_cast<int>(r.size()) != K + 1)
        throw std::invalid_argument("map_F_upper: state length must equal K+1");
    if (M.dim() < K + 2)
        throw std::invalid_argument("map_F_upper: mutation matrix needs ell >= K+2");
    const double phi = mean_fitness(r, land);
    const double tail = std::max(0.0, 1.0 - l1_sum(r));
    std::vector<double> out(static_cast<std::size_t>(K) + 1, 0.0);
    for (int k = 0; k <= K; ++k) {
        double s = tail * M(k + 1, k);
        for (int i = 0; i <= K; ++i)
            s += r[static_cast<std::size_t>(i)] * land.fitness(i) * M(i, k);
        out[static_cast<std::size_t>(k)] = s / phi;
    }
    return out;
}

FixedPoint fixed_point_closed_form(int b, double a, const FitnessLandscape& land) {
    const int K = land.cutoff();
    if (K > 16)
        throw GuardError("fixed_point_closed_form: chain enumeration guarded to K <= 16");
    if (!(a > 0.0)) throw std::invalid_argument("fixed_point_closed_form: a must be positive");

    FixedPoint fp;
    fp.b = b;
    fp.rho.assign(static_cast<std::size_t>(K) + 1, 0.0);
    if (b == K + 1) return fp;  // the identically-zero solution

    const IndexSet idx = index_set(land, a);
    if (!idx.contains(b))
        throw std::domain_error("fixed_point_closed_form: index " + std::to_string(b) +
                                " is not in I_A for a = " + std::to_string(a));

    const double Ab = land.fitness(b);
    for (int i = 1; i <= K - b; ++i) {
        if (Ab == land.fitness(b + i))
            throw std::domain_error(
                "fixed_point_closed_form: degenerate landscape, A(b) equals A(b+" +
                std::to_string(i) + ")");
    }

    // Chain sums: c_0 = 1 and, for 1 <= k <= K-b,
    //   c_k = A(b) (a^k / A(b+k)) sum over chains 0=i_0<...<i_h=k of
    //         prod_t A(b+i_t) / ((i_t - i_{t-1})! (A(b) - A(b+i_t))).
    // Chains are enumerated as bitmasks of the interior set {1,...,k-1}.
    const int span = K - b;
    std::vector<double> factorial(static_cast<std::size_t>(span) + 1, 1.0);
    for (int i = 1; i <= span; ++i) factorial[static_cast<std::size_t>(i)] = factorial[i - 1] * i;

    std::vector<double> c(static_cast<std::size_t>(span) + 1, 0.0);
    c[0] = 1.0;
    for (int k = 1; k <= span; ++k) {
        double chain_sum = 0.0;
        const unsigned masks = 1u << (k - 1);
        for (unsigned mask = 0; mask < masks; ++mask) {
            double prod = 1.0;
            int prev = 0;
            for (int i = 1; i < k; ++i) {
                if (mask & (1u << (i - 1))) {
                    prod *= land.fitness(b + i) /
                            (factorial[static_cast<std::size_t>(i - prev)] * (Ab - land.fitness(b + i)));
                    prev = i;
                }
            }
            prod *= land.fitness(b + k) /
                    (factorial[static_cast<std::size_t>(k - prev)] * (Ab - land.fitness(b + k)));
            chain_sum += prod;
        }
        c[static_cast<std::size_t>(k)] =
            Ab * std::pow(a, k) / land.fitness(b + k) * chain_sum;
    }

    // Normalize so that phi(rho) = A(b) e^{-a}; equivalent to the paper's
    // unbounded first-factor chain sum.
    double scale = 0.0;
    for (int k = 0; k <= span; ++k) scale += c[static_cast<std::size_t>(k)] * (land.fitness(b + k) - 1.0);
    const double rho_b = (Ab * std::exp(-a) - 1.0) / scale;
    if (!(rho_b > 0.0) || !std::isfinite(rho_b))
        throw std::domain_error("fixed_point_closed_form: normalization failed");

    for (int k = 0; k <= span; ++k)
        fp.rho[static_cast<std::size_t>(b + k)] = rho_b * c[static_cast<std::size_t>(k)];

    fp.residual = l1_diff(map_G(fp.rho, a, land), fp.rho);
    return fp;
}

std::vector<FixedPoint> all_fixed_points(double a, const FitnessLandscape& land) {
    std::vector<FixedPoint> out;
    for (int b : index_set(land, a).indices) out.push_back(fixed_point_closed_form(b, a, land));
    return out;
}

IterationResult iterate_to_fixed_point(std::vector<double> r0, double a,
                                       const FitnessLandscape& land, double tol, long max_iter) {
    if (!(tol > 0.0)) throw std::invalid_argument("iterate_to_fixed_point: tol must be positive");
    if (!is_truncated_dist(r0))
        throw std::invalid_argument("iterate_to_fixed_point: start is not in D^K");
    IterationResult res;
    res.limit = std::move(r0);
    for (long n = 1; n <= max_iter; ++n) {
        std::vector<double> next = map_G(res.limit, a, land);
        const double diff = l1_diff(next, res.limit);
        res.limit = std::move(next);
        res.iters = n;
        if (diff < tol) {
            res.converged = true;
            break;
        }
    }
    return res;
}

}  // namespace wfq
