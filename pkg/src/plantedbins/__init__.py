"""Planted balls-and-bins: how many random balls hide a planted arrangement.

Exact and Monte Carlo total variation distance between the standard and
planted occupancy distributions, the regime statistics and thresholds
that distinguish them, the likelihood-ratio optimal test, and the
asymptotic predictions for the distinguishability threshold.
"""

from .asymptotics import (
    MomentReport,
    empirical_moments,
    ks_distance_to_normal,
    ks_normality,
    predicted_moments,
    predicted_tv,
    std_normal_cdf,
)
from .backend import backend_name
from .errors import (
    DegeneratePlanting,
    DegenerateStandardization,
    DimensionMismatch,
    EnumerationTooLarge,
    InvalidPlanting,
    InvalidScale,
    NoThresholdDefined,
    NotEnoughBalls,
    PlantedBinsError,
    ScaleTooLarge,
    UndefinedErrorTerm,
    UndefinedForEmpty,
    UnsupportedPower,
)
from .likelihood import (
    LogRatio,
    error_term_asymptotic,
    error_term_exact,
    log_prob_pl,
    log_prob_st,
    log_ratio,
    log_ratio_expansion,
)
from .mc import Dist
from .model import (
    Configuration,
    Planting,
    Regime,
    RegimeSpec,
    classify_regime,
    load_planting,
    make_configuration,
    make_planting,
    planting_from_source,
    planting_variance,
    power_sums,
    sample_pl,
    sample_st,
    scale_m,
)
from .stats import (
    Decision,
    Direction,
    StatisticKind,
    ThresholdSpec,
    bin_deviations,
    decide,
    decision_threshold,
    flat_stat,
    hilly_stat,
    intermediate_stat,
    pair_count,
    power_stat,
)
from .tv import (
    TvEstimate,
    enumerate_configurations,
    exact_tv,
    mc_tv_optimal,
    mc_tv_strategy,
)

__version__ = "0.1.0"

__all__ = [
    "Configuration",
    "Decision",
    "DegeneratePlanting",
    "DegenerateStandardization",
    "DimensionMismatch",
    "Direction",
    "Dist",
    "EnumerationTooLarge",
    "InvalidPlanting",
    "InvalidScale",
    "LogRatio",
    "MomentReport",
    "NoThresholdDefined",
    "NotEnoughBalls",
    "PlantedBinsError",
    "Planting",
    "Regime",
    "RegimeSpec",
    "ScaleTooLarge",
    "StatisticKind",
    "ThresholdSpec",
    "TvEstimate",
    "UndefinedErrorTerm",
    "UndefinedForEmpty",
    "UnsupportedPower",
    "backend_name",
    "bin_deviations",
    "classify_regime",
    "decide",
    "decision_threshold",
    "empirical_moments",
    "enumerate_configurations",
    "error_term_asymptotic",
    "error_term_exact",
    "exact_tv",
    "flat_stat",
    "hilly_stat",
    "intermediate_stat",
    "ks_distance_to_normal",
    "ks_normality",
    "load_planting",
    "log_prob_pl",
    "log_prob_st",
    "log_ratio",
    "log_ratio_expansion",
    "make_configuration",
    "make_planting",
    "mc_tv_optimal",
    "mc_tv_strategy",
    "pair_count",
    "planting_from_source",
    "planting_variance",
    "power_stat",
    "power_sums",
    "predicted_moments",
    "predicted_tv",
    "sample_pl",
    "sample_st",
    "scale_m",
    "std_normal_cdf",
]
