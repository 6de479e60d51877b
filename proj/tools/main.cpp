// =============================================================================
// main.cpp — wfq command line.
//
// Subcommands: fixed-points, iterate, simulate, hitting-time, quasipotential,
// phase-diagram, lumping-check.  Structured single results go to JSON, sweeps
// to CSV; all outputs are deterministic given (config, seed).
//
// Exit codes: 0 success, 2 configuration/usage errors, 3 runtime guard
// violations (state-space or grid explosions, refused regimes).
// =============================================================================
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wfq/config.hpp"
#include "wfq/dynamics.hpp"
#include "wfq/io.hpp"
#include "wfq/landscape.hpp"
#include "wfq/ldp.hpp"
#include "wfq/mutation.hpp"
#include "wfq/simulate.hpp"
#include "wfq/stats.hpp"

using json = nlohmann::ordered_json;

namespace {

std::vector<double> parse_number_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string(what) + ": cannot parse '" + item + "'");
        }
    }
    if (out.empty()) throw std::invalid_argument(std::string(what) + ": empty list");
    return out;
}

struct Range {
    double lo = 0, hi = 0, step = 0;
    std::vector<double> values() const {
        std::vector<double> out;
        for (double v = lo; v <= hi + 1e-12; v += step) out.push_back(v);
        return out;
    }
};

// start:stop:step, inclusive start, inclusive stop when hit exactly.
Range parse_range(const std::string& text, const char* what) {
    Range r;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &r.lo, &r.hi, &r.step) != 3)
        throw std::invalid_argument(std::string(what) + ": expected start:stop:step, got '" +
                                    text + "'");
    if (!(r.step > 0) || r.hi < r.lo)
        throw std::invalid_argument(std::string(what) + ": need step > 0 and stop >= start");
    return r;
}

void emit(const std::string& text, const std::string& out_path) {
    if (!out_path.empty())
        wfq::write_file_atomic(out_path, text);
    else
        std::cout << text;
}

std::string hitting_records_csv(const std::vector<wfq::HittingTimeRecord>& records) {
    std::string csv = "replica,seed,value,censored\n";
    for (const auto& rec : records) {
        csv += std::to_string(rec.replica) + "," + std::to_string(rec.stream_seed) + "," +
               std::to_string(rec.value) + "," + (rec.censored ? "1" : "0") + "\n";
    }
    return csv;
}

void warn_degenerate(const wfq::IndexSet& idx) {
    for (int b : idx.degenerate)
        std::cerr << "warning: A(" << b << ") e^{-a} equals 1 exactly;"
                  << " index excluded from I_A and the classifier is degenerate there\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wright-Fisher quasispecies toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    std::uint64_t seed = wfq::kDefaultSeed;
    int threads = 1;
    std::string out_path;
    bool json_flag = false;
    app.add_option("--seed", seed, "Base RNG seed (default 123456789)");
    app.add_option("--threads", threads, "Worker threads for replica loops");
    app.add_option("--out", out_path, "Output file (default: stdout)");
    app.add_flag("--json", json_flag, "JSON output (default for structured results)");

    // ---- fixed-points ------------------------------------------------------
    auto* cmd_fp = app.add_subcommand("fixed-points", "List I_A and every fixed point of G");
    std::string fp_fitness;
    double fp_a = 0;
    cmd_fp->add_option("--fitness", fp_fitness, "Fitness values A(0..K), comma separated")
        ->required();
    cmd_fp->add_option("--a", fp_a, "Mutation intensity a = lim ell*q")->required();

    // ---- iterate -----------------------------------------------------------
    auto* cmd_it = app.add_subcommand("iterate", "Iterate G to a fixed point from a start");
    std::string it_fitness, it_r0;
    double it_a = 0, it_tol = 1e-12;
    long it_max = 1000000;
    cmd_it->add_option("--fitness", it_fitness, "Fitness values A(0..K)")->required();
    cmd_it->add_option("--a", it_a, "Mutation intensity")->required();
    cmd_it->add_option("--r0", it_r0, "Start point in D^K, comma separated")->required();
    cmd_it->add_option("--tol", it_tol, "L1 stopping tolerance");
    cmd_it->add_option("--max-iter", it_max, "Iteration cap");

    // ---- simulate ----------------------------------------------------------
    auto* cmd_sim = app.add_subcommand("simulate", "Run occupancy-chain trajectories");
    std::string sim_config;
    cmd_sim->add_option("--config", sim_config, "TOML run configuration")->required();

    // ---- hitting-time ------------------------------------------------------
    auto* cmd_hit = app.add_subcommand("hitting-time", "Monte Carlo hitting times");
    std::string hit_config, hit_kind = "tau0", hit_fitness, hit_start;
    int hit_ell = 0, hit_kappa = 2, hit_m = 0, hit_k = 0, hit_replicas = 0;
    double hit_q = 0, hit_a = 0, hit_cap = 1e7;
    cmd_hit->add_option("--config", hit_config, "TOML run configuration");
    cmd_hit->add_option("--kind", hit_kind, "tau0 (persistence) or tau-star (neutral discovery)");
    cmd_hit->add_option("--k", hit_k, "Target class for tau-star");
    cmd_hit->add_option("--ell", hit_ell, "Genome length");
    cmd_hit->add_option("--kappa", hit_kappa, "Alphabet size");
    cmd_hit->add_option("--q", hit_q, "Per-site mutation probability");
    cmd_hit->add_option("--a", hit_a, "Sets q = a/ell when --q is absent");
    cmd_hit->add_option("--m", hit_m, "Population size");
    cmd_hit->add_option("--fitness", hit_fitness, "Fitness values A(0..K)");
    cmd_hit->add_option("--start", hit_start, "master | neutral | fixed-point <b>");
    cmd_hit->add_option("--replicas", hit_replicas, "Replica count");
    cmd_hit->add_option("--cap", hit_cap, "Censoring cap in steps");

    // ---- quasipotential ----------------------------------------------------
    auto* cmd_qp = app.add_subcommand("quasipotential", "V(rho^0, 0) by grid shortest path");
    std::string qp_fitness;
    double qp_a = 0;
    int qp_resolution = 0;
    bool qp_no_path = false;
    cmd_qp->add_option("--fitness", qp_fitness, "Fitness values A(0..K)")->required();
    cmd_qp->add_option("--a", qp_a, "Mutation intensity")->required();
    cmd_qp->add_option("--resolution", qp_resolution, "Grid resolution (default by K)");
    cmd_qp->add_flag("--no-path", qp_no_path, "Omit the optimal path from the output");

    // ---- phase-diagram -----------------------------------------------------
    auto* cmd_pd = app.add_subcommand("phase-diagram", "Sweep (a, alpha) and classify phases");
    std::string pd_fitness, pd_a_range, pd_alpha_range;
    int pd_kappa = 2, pd_resolution = 0;
    double pd_margin = 0.02;
    cmd_pd->add_option("--fitness", pd_fitness, "Fitness values A(0..K)")->required();
    cmd_pd->add_option("--a-range", pd_a_range, "a sweep, start:stop:step")->required();
    cmd_pd->add_option("--alpha-range", pd_alpha_range, "alpha sweep, start:stop:step")
        ->required();
    cmd_pd->add_option("--kappa", pd_kappa, "Alphabet size");
    cmd_pd->add_option("--resolution", pd_resolution, "Grid resolution (default by K)");
    cmd_pd->add_option("--margin", pd_margin, "NearCritical band half width");

    // ---- lumping-check -----------------------------------------------------
    auto* cmd_lc = app.add_subcommand("lumping-check",
                                      "Compare the lumped matrix against the genotype oracle");
    int lc_ell = 0, lc_kappa = 0;
    double lc_q = 0;
    std::string lc_csv;
    cmd_lc->add_option("--ell", lc_ell, "Genome length (<= 10)")->required();
    cmd_lc->add_option("--kappa", lc_kappa, "Alphabet size (<= 4)")->required();
    cmd_lc->add_option("--q", lc_q, "Per-site mutation probability")->required();
    cmd_lc->add_option("--csv", lc_csv, "Also export the matrix as CSV (k,l,prob)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (cmd_fp->parsed()) {
            wfq::FitnessLandscape land(parse_number_list(fp_fitness, "--fitness"));
            const wfq::IndexSet idx = wfq::index_set(land, fp_a);
            warn_degenerate(idx);
            json doc{{"a", fp_a},
                     {"fitness", land.values()},
                     {"index_set", idx.indices},
                     {"degenerate", idx.degenerate}};
            doc["fixed_points"] = json::array();
            for (const auto& fp : wfq::all_fixed_points(fp_a, land))
                doc["fixed_points"].push_back(
                    json{{"b", fp.b}, {"rho", fp.rho}, {"residual", fp.residual}});
            emit(doc.dump(2) + "\n", out_path);
        } else if (cmd_it->parsed()) {
            wfq::FitnessLandscape land(parse_number_list(it_fitness, "--fitness"));
            auto res = wfq::iterate_to_fixed_point(parse_number_list(it_r0, "--r0"), it_a, land,
                                                   it_tol, it_max);
            if (!res.converged)
                std::cerr << "warning: no convergence within " << it_max << " iterations\n";
            json doc{{"limit", res.limit}, {"iters", res.iters}, {"converged", res.converged}};
            emit(doc.dump(2) + "\n", out_path);
        } else if (cmd_sim->parsed()) {
            wfq::SimulationConfig config =
                wfq::sim_config_from_table(wfq::parse_flat_toml_file(sim_config));
            if (!app.get_option("--seed")->empty()) config.seed = seed;
            json doc{{"config",
                      {{"ell", config.params.ell},
                       {"kappa", config.params.kappa},
                       {"q", config.params.q},
                       {"m", config.m},
                       {"fitness", config.landscape.values()},
                       {"seed", config.seed},
                       {"horizon", config.horizon},
                       {"burn_in", config.burn_in},
                       {"replicas", config.replicas}}}};
            doc["replicas"] = json::array();
            std::vector<double> grand(static_cast<std::size_t>(config.landscape.cutoff()) + 1,
                                      0.0);
            for (int r = 0; r < config.replicas; ++r) {
                wfq::TrajectoryStats stats = wfq::run_trajectory(config, r);
                for (std::size_t k = 0; k < grand.size(); ++k) grand[k] += stats.mean[k];
                doc["replicas"].push_back(json{{"replica", r},
                                               {"mean", stats.mean},
                                               {"variance", stats.variance},
                                               {"steps", stats.steps},
                                               {"final_state", stats.final_state}});
            }
            for (double& g : grand) g /= config.replicas;
            doc["mean_over_replicas"] = grand;
            emit(doc.dump(2) + "\n", out_path);
            std::cerr << "simulate: " << config.replicas << " replica(s), mean class-0 frequency "
                      << wfq::format_double(grand[0]) << "\n";
        } else if (cmd_hit->parsed()) {
            std::optional<wfq::SimulationConfig> config;
            if (!hit_config.empty())
                config.emplace(wfq::sim_config_from_table(wfq::parse_flat_toml_file(hit_config)));
            if (!config) {
                wfq::MutationParams params;
                params.ell = hit_ell;
                params.kappa = hit_kappa;
                params.q = cmd_hit->count("--q") ? hit_q
                           : (cmd_hit->count("--a") && hit_ell > 0 ? hit_a / hit_ell : 0.0);
                std::vector<double> fitness = hit_fitness.empty()
                                                  ? std::vector<double>{1.0}
                                                  : parse_number_list(hit_fitness, "--fitness");
                config.emplace(params, hit_m, wfq::FitnessLandscape(fitness));
            }
            if (!app.get_option("--seed")->empty()) config->seed = seed;
            if (hit_replicas > 0) config->replicas = hit_replicas;
            if (!hit_start.empty()) config->start = wfq::resolve_start_preset(*config, hit_start);
            config->validate();
            const long cap = static_cast<long>(hit_cap);

            std::vector<wfq::HittingTimeRecord> records;
            if (hit_kind == "tau0") {
                records = wfq::persistence_times(*config, config->start_state(), cap, threads);
            } else if (hit_kind == "tau-star") {
                records = wfq::neutral_hitting_times(*config, hit_k, cap, threads);
            } else {
                throw std::invalid_argument("hitting-time: --kind must be tau0 or tau-star");
            }
            emit(hitting_records_csv(records), out_path);
            const auto summary = wfq::summarize_hitting_times(records);
            std::cerr << "hitting-time " << hit_kind << ": mean "
                      << wfq::format_double(summary.mean_uncensored) << " over " << records.size()
                      << " replicas, censored fraction "
                      << wfq::format_double(summary.censored_fraction) << "\n";
        } else if (cmd_qp->parsed()) {
            wfq::FitnessLandscape land(parse_number_list(qp_fitness, "--fitness"));
            const int resolution =
                qp_resolution > 0 ? qp_resolution : wfq::default_resolution(land.cutoff());
            const auto res = wfq::quasipotential(qp_a, land, resolution);
            // Empirical grid error by comparison with the half-resolution run.
            const double coarse =
                wfq::quasipotential(qp_a, land, std::max(1, resolution / 2)).value;
            json doc{{"value", res.value},
                     {"resolution", res.resolution},
                     {"a", res.a},
                     {"fitness", res.fitness},
                     {"error_estimate", std::abs(coarse - res.value)}};
            if (!qp_no_path) doc["path"] = res.path;
            emit(doc.dump(2) + "\n", out_path);
        } else if (cmd_pd->parsed()) {
            wfq::FitnessLandscape land(parse_number_list(pd_fitness, "--fitness"));
            if (pd_kappa < 2) throw std::invalid_argument("phase-diagram: kappa must be >= 2");
            const int resolution =
                pd_resolution > 0 ? pd_resolution : wfq::default_resolution(land.cutoff());
            const Range a_range = parse_range(pd_a_range, "--a-range");
            const Range alpha_range = parse_range(pd_alpha_range, "--alpha-range");
            const double ln_kappa = std::log(static_cast<double>(pd_kappa));
            std::string csv = "a,alpha,psi,ln_kappa_over_alpha,phase\n";
            for (double a : a_range.values()) {
                const double psi_a = wfq::psi(a, land, resolution);
                for (double alpha : alpha_range.values()) {
                    const double alpha_psi = alpha * psi_a;
                    const char* phase = std::abs(alpha_psi - ln_kappa) < pd_margin
                                            ? "near-critical"
                                            : (alpha_psi > ln_kappa ? "supercritical"
                                                                    : "subcritical");
                    csv += wfq::format_double(a) + "," + wfq::format_double(alpha) + "," +
                           wfq::format_double(psi_a) + "," +
                           wfq::format_double(ln_kappa / alpha) + "," + phase + "\n";
                }
            }
            emit(csv, out_path);
        } else if (cmd_lc->parsed()) {
            wfq::MutationParams params{lc_ell, lc_kappa, lc_q};
            const wfq::LumpedMutationMatrix matrix = wfq::LumpedMutationMatrix::build(params);
            double worst = 0.0;
            for (int k = 0; k <= params.ell; ++k) {
                const std::vector<double> oracle = wfq::genotype_lumping_oracle_row(params, k);
                for (int l = 0; l <= params.ell; ++l)
                    worst = std::max(worst,
                                     std::abs(oracle[static_cast<std::size_t>(l)] - matrix(k, l)));
            }
            if (!lc_csv.empty()) {
                std::string csv = "k,l,prob\n";
                for (int k = 0; k <= params.ell; ++k)
                    for (int l = 0; l <= params.ell; ++l)
                        csv += std::to_string(k) + "," + std::to_string(l) + "," +
                               wfq::format_double(matrix(k, l)) + "\n";
                wfq::write_file_atomic(lc_csv, csv);
            }
            std::ostringstream line;
            line << "lumping-check ell=" << lc_ell << " kappa=" << lc_kappa << " q=" << lc_q
                 << ": max abs diff = " << wfq::format_double(worst)
                 << (worst <= 1e-10 ? " < 1e-10\n" : " EXCEEDS 1e-10\n");
            emit(line.str(), out_path);
            if (worst > 1e-10) return 1;
        }
    } catch (const wfq::GuardError& e) {
        std::cerr << "guard violation: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
