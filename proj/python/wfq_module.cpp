// =============================================================================
// wfq_module.cpp — Python bindings for the main operations.
// =============================================================================
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wfq/dynamics.hpp"
#include "wfq/landscape.hpp"
#include "wfq/ldp.hpp"
#include "wfq/mutation.hpp"
#include "wfq/simulate.hpp"
#include "wfq/stats.hpp"

namespace py = pybind11;
using namespace wfq;

PYBIND11_MODULE(_wfq, m) {
    m.doc() = "Wright-Fisher quasispecies toolkit";

    py::register_exception<GuardError>(m, "GuardError", PyExc_RuntimeError);

    // ---- landscape ----------------------------------------------------------
    py::class_<FitnessLandscape>(m, "FitnessLandscape")
        .def(py::init<std::vector<double>>(), py::arg("values"))
        .def_property_readonly("cutoff", &FitnessLandscape::cutoff)
        .def("fitness", &FitnessLandscape::fitness, py::arg("k"))
        .def_property_readonly("values", &FitnessLandscape::values)
        .def("__repr__", [](const FitnessLandscape& land) {
            std::string out = "FitnessLandscape([";
            for (std::size_t i = 0; i < land.values().size(); ++i)
                out += (i ? ", " : "") + std::to_string(land.values()[i]);
            return out + "])";
        });

    py::class_<IndexSet>(m, "IndexSet")
        .def_readonly("indices", &IndexSet::indices)
        .def_readonly("degenerate", &IndexSet::degenerate)
        .def("contains", &IndexSet::contains, py::arg("b"));

    m.def("index_set", &index_set, py::arg("landscape"), py::arg("a"));

    // ---- mutation -----------------------------------------------------------
    py::class_<MutationParams>(m, "MutationParams")
        .def(py::init([](int ell, int kappa, double q) {
                 MutationParams p{ell, kappa, q};
                 p.validate();
                 return p;
             }),
             py::arg("ell"), py::arg("kappa"), py::arg("q"))
        .def_readonly("ell", &MutationParams::ell)
        .def_readonly("kappa", &MutationParams::kappa)
        .def_readonly("q", &MutationParams::q);

    py::class_<LumpedMutationMatrix>(m, "LumpedMutationMatrix")
        .def_static("build", &LumpedMutationMatrix::build, py::arg("params"))
        .def("__call__", &LumpedMutationMatrix::operator(), py::arg("k"), py::arg("l"))
        .def_property_readonly("dim", &LumpedMutationMatrix::dim)
        .def("row",
             [](const LumpedMutationMatrix& matrix, int k) {
                 auto row = matrix.row(k);
                 return std::vector<double>(row.begin(), row.end());
             },
             py::arg("k"))
        .def("max_row_sum_error", &LumpedMutationMatrix::max_row_sum_error);

    m.def("lumped_entry", &lumped_entry, py::arg("params"), py::arg("k"), py::arg("l"));
    m.def("limit_matrix_entry", &limit_matrix_entry, py::arg("a"), py::arg("i"), py::arg("j"));
    m.def("genotype_lumping_oracle", &genotype_lumping_oracle, py::arg("params"), py::arg("k"),
          py::arg("l"));

    // ---- dynamics -----------------------------------------------------------
    m.def("mean_fitness",
          [](const std::vector<double>& r, const FitnessLandscape& land) {
              return mean_fitness(r, land);
          },
          py::arg("r"), py::arg("landscape"));
    m.def("map_F",
          [](const std::vector<double>& x, const LumpedMutationMatrix& matrix,
             const FitnessLandscape& land) { return map_F(x, matrix, land); },
          py::arg("x"), py::arg("matrix"), py::arg("landscape"));
    m.def("map_G",
          [](const std::vector<double>& r, double a, const FitnessLandscape& land) {
              return map_G(r, a, land);
          },
          py::arg("r"), py::arg("a"), py::arg("landscape"));
    m.def("map_F_lower",
          [](const std::vector<double>& r, const LumpedMutationMatrix& matrix,
             const FitnessLandscape& land) { return map_F_lower(r, matrix, land); },
          py::arg("r"), py::arg("matrix"), py::arg("landscape"));
    m.def("map_F_upper",
          [](const std::vector<double>& r, const LumpedMutationMatrix& matrix,
             const FitnessLandscape& land) { return map_F_upper(r, matrix, land); },
          py::arg("r"), py::arg("matrix"), py::arg("landscape"));

    py::class_<FixedPoint>(m, "FixedPoint")
        .def_readonly("b", &FixedPoint::b)
        .def_readonly("rho", &FixedPoint::rho)
        .def_readonly("residual", &FixedPoint::residual);

    m.def("fixed_point_closed_form", &fixed_point_closed_form, py::arg("b"), py::arg("a"),
          py::arg("landscape"));
    m.def("all_fixed_points", &all_fixed_points, py::arg("a"), py::arg("landscape"));

    py::class_<IterationResult>(m, "IterationResult")
        .def_readonly("limit", &IterationResult::limit)
        .def_readonly("iters", &IterationResult::iters)
        .def_readonly("converged", &IterationResult::converged);

    m.def("iterate_to_fixed_point", &iterate_to_fixed_point, py::arg("r0"), py::arg("a"),
          py::arg("landscape"), py::arg("tol") = 1e-12, py::arg("max_iter") = 1000000);

    // ---- large deviations ----------------------------------------------------
    m.def("rate_multinomial",
          [](const std::vector<double>& p, const std::vector<double>& t) {
              return rate_multinomial(p, t);
          },
          py::arg("p"), py::arg("t"));
    m.def("cost_one_step",
          [](const std::vector<double>& r, const std::vector<double>& t, double a,
             const FitnessLandscape& land) { return cost_one_step(r, t, a, land); },
          py::arg("r"), py::arg("t"), py::arg("a"), py::arg("landscape"));

    py::class_<QuasipotentialResult>(m, "QuasipotentialResult")
        .def_readonly("value", &QuasipotentialResult::value)
        .def_readonly("path", &QuasipotentialResult::path)
        .def_readonly("resolution", &QuasipotentialResult::resolution)
        .def_readonly("a", &QuasipotentialResult::a)
        .def_readonly("fitness", &QuasipotentialResult::fitness);

    m.def("quasipotential", &quasipotential, py::arg("a"), py::arg("landscape"),
          py::arg("resolution"));
    m.def("psi", &psi, py::arg("a"), py::arg("landscape"), py::arg("resolution"));
    m.def("default_resolution", &default_resolution, py::arg("K"));

    py::enum_<Phase>(m, "Phase")
        .value("Supercritical", Phase::Supercritical)
        .value("Subcritical", Phase::Subcritical)
        .value("NearCritical", Phase::NearCritical);

    py::class_<Classification>(m, "Classification")
        .def_readonly("phase", &Classification::phase)
        .def_readonly("psi_value", &Classification::psi_value)
        .def_readonly("alpha_psi", &Classification::alpha_psi)
        .def_readonly("ln_kappa", &Classification::ln_kappa)
        .def_readonly("margin", &Classification::margin);

    m.def("classify", &classify, py::arg("a"), py::arg("alpha"), py::arg("kappa"),
          py::arg("landscape"), py::arg("resolution"), py::arg("margin") = 0.02);

    m.def("multinomial_log_coeff",
          [](const std::vector<long long>& counts) { return multinomial_log_coeff(counts); },
          py::arg("counts"));
    m.def("stirling_bound_check",
          [](const std::vector<long long>& counts) { return stirling_bound_check(counts); },
          py::arg("counts"));

    // ---- simulation -----------------------------------------------------------
    py::class_<SimulationConfig>(m, "SimulationConfig")
        .def(py::init<MutationParams, int, FitnessLandscape>(), py::arg("params"), py::arg("m"),
             py::arg("landscape"))
        .def_readwrite("seed", &SimulationConfig::seed)
        .def_readwrite("horizon", &SimulationConfig::horizon)
        .def_readwrite("burn_in", &SimulationConfig::burn_in)
        .def_readwrite("replicas", &SimulationConfig::replicas)
        .def_readwrite("start", &SimulationConfig::start)
        .def_readonly("m", &SimulationConfig::m)
        .def_readonly("params", &SimulationConfig::params)
        .def_readonly("landscape", &SimulationConfig::landscape)
        .def("validate", &SimulationConfig::validate);

    py::class_<TrajectoryStats>(m, "TrajectoryStats")
        .def_readonly("mean", &TrajectoryStats::mean)
        .def_readonly("variance", &TrajectoryStats::variance)
        .def_readonly("steps", &TrajectoryStats::steps)
        .def_readonly("final_state", &TrajectoryStats::final_state);

    py::enum_<HitKind>(m, "HitKind")
        .value("PersistenceTau0", HitKind::PersistenceTau0)
        .value("NeutralTauStar", HitKind::NeutralTauStar);

    py::class_<HittingTimeRecord>(m, "HittingTimeRecord")
        .def_readonly("kind", &HittingTimeRecord::kind)
        .def_readonly("k", &HittingTimeRecord::k)
        .def_readonly("value", &HittingTimeRecord::value)
        .def_readonly("censored", &HittingTimeRecord::censored)
        .def_readonly("cap", &HittingTimeRecord::cap)
        .def_readonly("replica", &HittingTimeRecord::replica)
        .def_readonly("stream_seed", &HittingTimeRecord::stream_seed);

    m.def("start_all_in_class", &start_all_in_class, py::arg("ell"), py::arg("m"),
          py::arg("cls"));
    m.def("start_fixed_point", &start_fixed_point, py::arg("config"), py::arg("b"));
    m.def("run_trajectory", &run_trajectory, py::arg("config"), py::arg("replica") = 0);
    m.def("persistence_time", &persistence_time, py::arg("config"), py::arg("start"),
          py::arg("cap"), py::arg("replica") = 0);
    m.def("persistence_times", &persistence_times, py::arg("config"), py::arg("start"),
          py::arg("cap"), py::arg("threads") = 1);
    m.def("neutral_hitting_time", &neutral_hitting_time, py::arg("config"), py::arg("k"),
          py::arg("cap"), py::arg("replica") = 0);
    m.def("neutral_hitting_times", &neutral_hitting_times, py::arg("config"), py::arg("k"),
          py::arg("cap"), py::arg("threads") = 1);
    m.def("master_creation_probe", &master_creation_probe, py::arg("config"), py::arg("gamma"),
          py::arg("C"), py::arg("threads") = 1);

    // ---- stats ----------------------------------------------------------------
    m.def("cramer_bernoulli", &cramer_bernoulli, py::arg("t"), py::arg("p"));

    py::class_<ScalingFit>(m, "ScalingFit")
        .def_readonly("slope", &ScalingFit::slope)
        .def_readonly("intercept", &ScalingFit::intercept)
        .def_readonly("r_squared", &ScalingFit::r_squared)
        .def_readonly("points", &ScalingFit::points);

    m.def("fit_log_scaling",
          [](const std::vector<std::pair<double, double>>& pts) { return fit_log_scaling(pts); },
          py::arg("points"));
    m.def("hitting_count_bound_check", &hitting_count_bound_check, py::arg("h"),
          py::arg("lambda_"), py::arg("p"), py::arg("trials"), py::arg("escape"), py::arg("ret"),
          py::arg("N"), py::arg("seed"));
}
