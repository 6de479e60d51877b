#include "wfq/ldp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>

namespace wfq {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double l1_sum(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0);
}

int min_support(std::span<const double> v) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] > 0.0) return static_cast<int>(i);
    return static_cast<int>(v.size());  // zero vector
}

// Node-constant part of I_K(p, v):  sum v ln v + tail_v ln tail_v.
double entropy_term(std::span<const double> v) {
    double s = 0.0;
    for (double x : v)
        if (x > 0.0) s += x * std::log(x);
    const double tail = std::max(0.0, 1.0 - l1_sum(v));
    if (tail > 0.0) s += tail * std::log(tail);
    return s;
}

void check_dist(std::span<const double> v, const char* what) {
    if (!is_truncated_dist(v, 1e-9))
        throw std::invalid_argument(std::string(what) + ": input is not a truncated distribution");
}

struct EdgeSource {
    // Precomputed pieces of I_K(G(u), .) for a fixed u.
    std::vector<double> log_g;
    double log_tail_g = 0.0;
    int minsup = 0;

    explicit EdgeSource(std::span<const double> u, double a, const FitnessLandscape& land) {
        const std::vector<double> g = map_G(u, a, land);
        log_g.resize(g.size());
        for (std::size_t k = 0; k < g.size(); ++k)
            log_g[k] = g[k] > 0.0 ? std::log(g[k]) : -kInf;
        const double tail = 1.0 - l1_sum(g);
        // |G(r)| < 1 strictly whenever r != 0 (Poisson mass escapes beyond K),
        // and G(0) = 0; either way the tail is positive.
        log_tail_g = std::log(std::max(tail, 0.0));
        minsup = min_support(u);
    }

    // Cost to a node with precomputed entropy and support; +inf when the
    // target charges a class G(u) does not.
    double cost_to(std::span<const double> v, double entropy_v, int minsup_v) const {
        if (minsup_v < minsup) return kInf;
        double s = entropy_v;
        for (std::size_t k = 0; k < v.size(); ++k)
            if (v[k] > 0.0) s -= v[k] * log_g[k];
        const double tail_v = std::max(0.0, 1.0 - l1_sum(v));
        if (tail_v > 0.0) {
            if (log_tail_g == -kInf) return kInf;
            s -= tail_v * log_tail_g;
        }
        return std::max(s, 0.0);
    }
};

void enumerate_lattice(int K, int resolution, int coord, int remaining,
                       std::vector<int>& current, std::vector<std::vector<double>>& out) {
    if (coord == K) {
        std::vector<double> node(static_cast<std::size_t>(K) + 1);
        for (int i = 0; i < K; ++i) node[i] = static_cast<double>(current[i]) / resolution;
        for (int j = 0; j <= remaining; ++j) {
            node[static_cast<std::size_t>(K)] = static_cast<double>(j) / resolution;
            out.push_back(node);
        }
        return;
    }
    for (int j = 0; j <= remaining; ++j) {
        current[static_cast<std::size_t>(coord)] = j;
        enumerate_lattice(K, resolution, coord + 1, remaining - j, current, out);
    }
}

}  // namespace

double rate_multinomial(std::span<const double> p, std::span<const double> t) {
    check_dist(p, "rate_multinomial");
    check_dist(t, "rate_multinomial");
    if (p.size() != t.size())
        throw std::invalid_argument("rate_multinomial: dimension mismatch");
    double s = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (t[k] > 0.0) {
            if (!(p[k] > 0.0)) return kInf;
            s += t[k] * (std::log(t[k]) - std::log(p[k]));
        }
    }
    const double tail_t = std::max(0.0, 1.0 - l1_sum(t));
    const double tail_p = std::max(0.0, 1.0 - l1_sum(p));
    if (tail_t > 0.0) {
        if (!(tail_p > 0.0)) return kInf;
        s += tail_t * (std::log(tail_t) - std::log(tail_p));
    }
    return std::max(s, 0.0);
}

double cost_one_step(std::span<const double> r, std::span<const double> t, double a,
                     const FitnessLandscape& land) {
    return rate_multinomial(map_G(r, a, land), t);
}

RateCostGrid RateCostGrid::build(int K, int resolution) {
    if (K < 0 || resolution < 1)
        throw std::invalid_argument("RateCostGrid: need K >= 0 and resolution >= 1");
    // C(resolution + K + 1, K + 1) lattice nodes; refuse blowups early.
    double count = 1.0;
    for (int i = 1; i <= K + 1; ++i) count *= static_cast<double>(resolution + i) / i;
    if (count > 4e6)
        throw GuardError("RateCostGrid: " + std::to_string(static_cast<long long>(count)) +
                         " lattice nodes exceed the 4e6 guard");
    RateCostGrid grid;
    grid.K = K;
    grid.resolution = resolution;
    std::vector<int> current(static_cast<std::size_t>(K) + 1, 0);
    enumerate_lattice(K, resolution, 0, resolution, current, grid.nodes);
    grid.lattice_count = grid.nodes.size();
    return grid;
}

int RateCostGrid::find_exact(std::span<const double> node) const {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (std::equal(nodes[i].begin(), nodes[i].end(), node.begin(), node.end()))
            return static_cast<int>(i);
    }
    return -1;
}

int RateCostGrid::inject(std::span<const double> node) {
    if (static_cast<int>(node.size()) != K + 1)
        throw std::invalid_argument("RateCostGrid::inject: dimension mismatch");
    check_dist(node, "RateCostGrid::inject");
    const int found = find_exact(node);
    if (found >= 0) return found;
    nodes.emplace_back(node.begin(), node.end());
    return static_cast<int>(nodes.size()) - 1;
}

double cost_l_steps(std::span<const double> r, std::span<const double> t, int l,
                    const RateCostGrid& grid, double a, const FitnessLandscape& land) {
    if (l < 1) throw std::invalid_argument("cost_l_steps: l must be >= 1");
    if (land.cutoff() != grid.K)
        throw std::invalid_argument("cost_l_steps: grid K does not match landscape");
    RateCostGrid g = grid;
    const int src = g.inject(r);
    const int dst = g.inject(t);
    const std::size_t n = g.nodes.size();

    std::vector<double> entropy(n);
    std::vector<int> minsup(n);
    for (std::size_t i = 0; i < n; ++i) {
        entropy[i] = entropy_term(g.nodes[i]);
        minsup[i] = min_support(g.nodes[i]);
    }

    std::vector<double> cur(n, kInf), next(n);
    cur[static_cast<std::size_t>(src)] = 0.0;
    for (int stage = 0; stage < l; ++stage) {
        std::fill(next.begin(), next.end(), kInf);
        const bool last = (stage == l - 1);
        for (std::size_t u = 0; u < n; ++u) {
            if (cur[u] == kInf) continue;
            const EdgeSource edges(g.nodes[u], a, land);
            if (last) {
                const double c = edges.cost_to(g.nodes[dst], entropy[dst], minsup[dst]);
                next[static_cast<std::size_t>(dst)] =
                    std::min(next[static_cast<std::size_t>(dst)], cur[u] + c);
            } else {
                for (std::size_t v = 0; v < n; ++v) {
                    const double c = edges.cost_to(g.nodes[v], entropy[v], minsup[v]);
                    if (cur[u] + c < next[v]) next[v] = cur[u] + c;
                }
            }
        }
        cur.swap(next);
    }
    return cur[static_cast<std::size_t>(dst)];
}

PathCost min_cost_path(std::span<const double> from, std::span<const double> to, double a,
                       const FitnessLandscape& land, int resolution,
                       std::span<const std::vector<double>> extra) {
    RateCostGrid grid = RateCostGrid::build(land.cutoff(), resolution);
    const int src = grid.inject(from);
    const int dst = grid.inject(to);
    for (const auto& node : extra) grid.inject(node);
    const std::size_t n = grid.nodes.size();

    std::vector<double> entropy(n);
    std::vector<int> minsup(n);
    for (std::size_t i = 0; i < n; ++i) {
        entropy[i] = entropy_term(grid.nodes[i]);
        minsup[i] = min_support(grid.nodes[i]);
    }

    std::vector<double> dist(n, kInf);
    std::vector<int> parent(n, -1);
    std::vector<char> settled(n, 0);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[static_cast<std::size_t>(src)] = 0.0;
    queue.emplace(0.0, src);

    while (!queue.empty()) {
        const auto [d, u] = queue.top();
        queue.pop();
        if (settled[static_cast<std::size_t>(u)]) continue;
        settled[static_cast<std::size_t>(u)] = 1;
        if (u == dst) break;
        const EdgeSource edges(grid.nodes[static_cast<std::size_t>(u)], a, land);
        for (std::size_t v = 0; v < n; ++v) {
            if (settled[v]) continue;
            const double c = edges.cost_to(grid.nodes[v], entropy[v], minsup[v]);
            if (c == kInf) continue;
            if (d + c < dist[v]) {
                dist[v] = d + c;
                parent[v] = u;
                queue.emplace(dist[v], static_cast<int>(v));
            }
        }
    }

    PathCost out;
    out.value = dist[static_cast<std::size_t>(dst)];
    if (out.value < kInf) {
        for (int v = dst; v != -1; v = parent[static_cast<std::size_t>(v)])
            out.path.push_back(grid.nodes[static_cast<std::size_t>(v)]);
        std::reverse(out.path.begin(), out.path.end());
    }
    return out;
}

QuasipotentialResult quasipotential(double a, const FitnessLandscape& land, int resolution) {
    const int K = land.cutoff();
    if (K > 4)
        throw GuardError("quasipotential: grid shortest path guarded to K <= 4, got K = " +
                         std::to_string(K));
    if (!index_set(land, a).contains(0))
        throw std::domain_error(
            "quasipotential: rho^0 does not exist (need A(0) e^{-a} > 1); psi vanishes here");

    const FixedPoint fp = fixed_point_closed_form(0, a, land);
    const std::vector<double> zero(static_cast<std::size_t>(K) + 1, 0.0);
    // The optimal path tends to pass near the intermediate fixed points, so
    // all of them join the grid as exact nodes.
    std::vector<std::vector<double>> waypoints;
    for (const FixedPoint& other : all_fixed_points(a, land)) waypoints.push_back(other.rho);
    PathCost pc = min_cost_path(fp.rho, zero, a, land, resolution, waypoints);
    if (!(pc.value < kInf))
        throw std::logic_error("quasipotential: 0 unreachable, which cannot happen");

    QuasipotentialResult res;
    res.value = pc.value;
    res.path = std::move(pc.path);
    res.resolution = resolution;
    res.a = a;
    res.fitness = land.values();
    return res;
}

double psi(double a, const FitnessLandscape& land, int resolution) {
    if (!(a > 0.0)) throw std::invalid_argument("psi: a must be positive");
    if (a >= std::log(land.fitness(0))) return 0.0;
    return quasipotential(a, land, resolution).value;
}

int default_resolution(int K) {
    switch (K) {
        case 0: return 2000;
        case 1: return 200;
        case 2: return 40;
        default: return 16;
    }
}

Classification classify(double a, double alpha, int kappa, const FitnessLandscape& land,
                        int resolution, double margin) {
    if (!(a > 0.0) || !(alpha > 0.0))
        throw std::invalid_argument("classify: a and alpha must be positive");
    if (kappa < 2) throw std::invalid_argument("classify: kappa must be >= 2");
    Classification c;
    c.psi_value = psi(a, land, resolution);
    c.alpha_psi = alpha * c.psi_value;
    c.ln_kappa = std::log(static_cast<double>(kappa));
    c.margin = margin;
    if (std::abs(c.alpha_psi - c.ln_kappa) < margin)
        c.phase = Phase::NearCritical;
    else
        c.phase = c.alpha_psi > c.ln_kappa ? Phase::Supercritical : Phase::Subcritical;
    return c;
}

double multinomial_log_coeff(std::span<const long long> counts) {
    if (counts.empty()) throw std::invalid_argument("multinomial_log_coeff: empty counts");
    long long n = 0;
    double denom = 0.0;
    for (long long c : counts) {
        if (c < 0) throw std::invalid_argument("multinomial_log_coeff: negative count");
        n += c;
        denom += std::lgamma(static_cast<double>(c) + 1.0);
    }
    if (n < 1) throw std::invalid_argument("multinomial_log_coeff: total must be >= 1");
    return std::lgamma(static_cast<double>(n) + 1.0) - denom;
}

bool stirling_bound_check(std::span<const long long> counts) {
    const double log_coeff = multinomial_log_coeff(counts);
    long long n = 0;
    for (long long c : counts) n += c;
    double s = 0.0;
    for (long long c : counts)
        if (c > 0)
            s += static_cast<double>(c) *
                 std::log(static_cast<double>(c) / static_cast<double>(n));
    const double N = static_cast<double>(counts.size());
    return std::abs(log_coeff + s) <= N * std::log(static_cast<double>(n)) + 2.0 * N;
}

}  // namespace wfq
