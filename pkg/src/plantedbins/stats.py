"""Distinguishing statistics, decision thresholds, and the decision rule.

The statistics weight the centered bin deviations q_i = (n/m)(z_i - m/n)
by the planted counts: the flat-regime statistic is sum a_i q_i**2, the
hilly-regime statistic is sum a_i q_i, and the intermediate one mixes
them.  Each has a threshold halfway between its means under the standard
and planted distributions.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import backend
from .errors import (
    DimensionMismatch,
    NoThresholdDefined,
    UndefinedForEmpty,
    UnsupportedPower,
)
from .model import Configuration, Planting, planting_variance


class StatisticKind(Enum):
    PAIRS = "pairs"
    FLAT_F = "f"
    HILLY_H = "h"
    INTERMEDIATE_I = "i"


class Direction(Enum):
    CHOOSE_ST_IF_AT_LEAST = "st_if_at_least"
    CHOOSE_PL_IF_AT_LEAST = "pl_if_at_least"


class Decision(Enum):
    ST = "st"
    PL = "pl"


@dataclass(frozen=True)
class ThresholdSpec:
    kind: StatisticKind
    mu: float
    direction: Direction


def bin_deviations(cfg: Configuration) -> np.ndarray:
    """Centered, scaled deviations q_i = (n/m)(z_i - m/n); they sum to 0."""
    if cfg.m == 0:
        raise UndefinedForEmpty("bin deviations undefined for m = 0")
    n, m = cfg.n, cfg.m
    z = cfg.counts_array().astype(np.float64)
    return (n / m) * (z - m / n)


def pair_count(cfg: Configuration) -> int:
    """Number of same-bin ball pairs, sum of z_i choose 2 (exact integer)."""
    return sum(z * (z - 1) // 2 for z in cfg.z)


def _check_dims(planting: Planting, cfg: Configuration):
    if planting.n != cfg.n:
        raise DimensionMismatch(
            f"planting has {planting.n} bins, configuration has {cfg.n}")
    if cfg.m == 0:
        raise UndefinedForEmpty("statistics undefined for m = 0")


def weighted_power_stats(planting: Planting, cfg: Configuration) -> np.ndarray:
    """All four sums a_i * q_i**p for p = 1..4 in one compensated pass."""
    _check_dims(planting, cfg)
    n, m = cfg.n, cfg.m
    idx = planting.active_index()
    active = cfg.counts_array()[idx].reshape(1, -1)
    weights = planting.counts_array()[idx].astype(np.float64)
    out = np.empty((1, 4))
    backend.kernels.weighted_power_sums(
        np.ascontiguousarray(active), weights, n / m, m / n, out)
    return out[0]


def flat_stat(planting: Planting, cfg: Configuration) -> float:
    """Quadratic statistic sum a_i q_i**2 (flat-regime discriminator)."""
    return float(weighted_power_stats(planting, cfg)[1])


def hilly_stat(planting: Planting, cfg: Configuration) -> float:
    """Linear statistic sum a_i q_i (hilly-regime discriminator)."""
    return float(weighted_power_stats(planting, cfg)[0])


def intermediate_stat(planting: Planting, cfg: Configuration) -> float:
    """Mixture statistic: hilly_stat - flat_stat / 2, one pass."""
    sums = weighted_power_stats(planting, cfg)
    return float(sums[0] - 0.5 * sums[1])


def power_stat(planting: Planting, cfg: Configuration, p: int) -> float:
    """Sum a_i * q_i**p for p in 1..4 (p=1 is hilly_stat, p=2 flat_stat)."""
    if p not in (1, 2, 3, 4):
        raise UnsupportedPower(f"power {p} not in 1..4")
    return float(weighted_power_stats(planting, cfg)[p - 1])


def statistic_value(planting: Planting, cfg: Configuration,
                    kind: StatisticKind) -> float:
    if kind is StatisticKind.PAIRS:
        return float(pair_count(cfg))
    sums = weighted_power_stats(planting, cfg)
    return combine_power_sums(sums.reshape(1, 4), kind)[0]


def combine_power_sums(sums: np.ndarray, kind: StatisticKind) -> np.ndarray:
    """Map a (B, 4) power-sum batch to the requested statistic values."""
    if kind is StatisticKind.HILLY_H:
        return sums[:, 0]
    if kind is StatisticKind.FLAT_F:
        return sums[:, 1]
    if kind is StatisticKind.INTERMEDIATE_I:
        return sums[:, 0] - 0.5 * sums[:, 1]
    raise NoThresholdDefined("pair count is not a threshold statistic")


def decision_threshold(planting: Planting, m: int,
                       kind: StatisticKind) -> ThresholdSpec:
    """Decision cutoff for a statistic: the midpoint of its two means.

    The quadratic statistic runs higher under the standard distribution,
    so values at or above its cutoff select standard; the linear and
    mixture statistics run higher under the planted distribution, so
    values at or above their cutoffs select planted.
    """
    if kind is StatisticKind.PAIRS:
        raise NoThresholdDefined("pair count has no decision threshold")
    if m < 1:
        raise UndefinedForEmpty("thresholds undefined for m = 0")
    n, k = planting.n, planting.k
    v = planting_variance(planting)
    if kind is StatisticKind.FLAT_F:
        mu = k * n / m - (k * k) * n / (2 * m * m)
        return ThresholdSpec(kind, mu, Direction.CHOOSE_ST_IF_AT_LEAST)
    if kind is StatisticKind.HILLY_H:
        mu = v * n * n / (2 * m)
        return ThresholdSpec(kind, mu, Direction.CHOOSE_PL_IF_AT_LEAST)
    mu = (-k * n / (2 * m) + (k * k) * n / (4 * m * m)
          + v * n * n / (2 * m))
    return ThresholdSpec(kind, mu, Direction.CHOOSE_PL_IF_AT_LEAST)


def decide(value: float, spec: ThresholdSpec) -> Decision:
    """Apply a threshold; exact ties go to the 'at least' side."""
    at_least = value >= spec.mu
    if spec.direction is Direction.CHOOSE_ST_IF_AT_LEAST:
        return Decision.ST if at_least else Decision.PL
    return Decision.PL if at_least else Decision.ST
