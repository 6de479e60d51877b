"""Wright-Fisher quasispecies toolkit: python bindings over the C++ core."""

from ._wfq import (  # noqa: F401
    Classification,
    FitnessLandscape,
    FixedPoint,
    GuardError,
    HitKind,
    HittingTimeRecord,
    IndexSet,
    IterationResult,
    LumpedMutationMatrix,
    MutationParams,
    Phase,
    QuasipotentialResult,
    ScalingFit,
    SimulationConfig,
    TrajectoryStats,
    all_fixed_points,
    classify,
    cost_one_step,
    cramer_bernoulli,
    default_resolution,
    fit_log_scaling,
    fixed_point_closed_form,
    genotype_lumping_oracle,
    hitting_count_bound_check,
    index_set,
    iterate_to_fixed_point,
    limit_matrix_entry,
    lumped_entry,
    map_F,
    map_F_lower,
    map_F_upper,
    map_G,
    master_creation_probe,
    mean_fitness,
    multinomial_log_coeff,
    neutral_hitting_time,
    neutral_hitting_times,
    persistence_time,
    persistence_times,
    psi,
    quasipotential,
    rate_multinomial,
    run_trajectory,
    start_all_in_class,
    start_fixed_point,
    stirling_bound_check,
)

__all__ = [name for name in dir() if not name.startswith("_")]
