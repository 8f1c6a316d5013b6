# SPDX-License-Identifier: Apache-2.0
"""Overlapped beam-pattern channel estimation for single-path mmWave MIMO."""

from ._core import (  # noqa: F401
    Algorithm,
    AlphaEstimator,
    AngleGrid,
    BeamPatternMatrix,
    BoundResult,
    ChannelRealization,
    Estimator,
    EstimationTrace,
    ExperimentConfig,
    GridKind,
    PairwiseContext,
    SelfTermError,
    StageMeasurement,
    __version__,
    bessel_i0,
    bound_curve,
    energy_at_pcef,
    energy_grid,
    estimate_alpha_mmse,
    failure_indicator,
    fuse_measurements,
    hypothesis_correlation,
    marcum_q1,
    pairwise_error_fixed_alpha,
    pairwise_error_rayleigh,
    pairwise_marcum_arguments,
    pcef_upper_bound,
    run_sweep,
    sample_channel,
    select_path,
    steering_vector_from_frequency,
    slot_counts,
)
