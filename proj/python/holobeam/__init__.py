"""Beam alignment simulator for holographic MIMO surfaces."""

from ._holobeam import (
    Error,
    HmtConfig,
    UserLocation,
    achievable_rate,
    batch_schedule,
    build_grid,
    chi2_dominance_bound,
    discrete_optimum,
    error_bound,
    far_field_gain_magnitude,
    holobeam_gaussian,
    mean_rss,
    min_neighbor_gap,
    num_batches,
    restricted_mean_profile,
    run_experiment_csv,
    run_trial,
    sinc,
)

__all__ = [
    "Error",
    "HmtConfig",
    "UserLocation",
    "achievable_rate",
    "batch_schedule",
    "build_grid",
    "chi2_dominance_bound",
    "discrete_optimum",
    "error_bound",
    "far_field_gain_magnitude",
    "holobeam_gaussian",
    "mean_rss",
    "min_neighbor_gap",
    "num_batches",
    "restricted_mean_profile",
    "run_experiment_csv",
    "run_trial",
    "sinc",
]
