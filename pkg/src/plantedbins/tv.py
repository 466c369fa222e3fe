"""Total variation distance: exact enumeration and Monte Carlo estimators.

The exact enumerator is the ground-truth oracle at desk scale.  The Monte
Carlo estimators exploit that the distance equals the gap between the two
distributions' masses on any likelihood-ratio decision region:

* optimal: region where the standard probability is at least the planted
  one (log-ratio <= 0, ties included);
* strategy: region where a threshold statistic picks standard.

Both estimate the gap as a difference of two empirical frequencies, one
pool of samples per distribution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np
from scipy.special import gammaln

from .errors import EnumerationTooLarge, NoThresholdDefined, NotEnoughBalls
from .likelihood import log_falling_factorial_m, log_ratio_batch
from .mc import Dist, SamplingPlan, chunk_stream, run_chunked, SIDE_ST, SIDE_PL
from .model import Configuration, Planting
from .stats import (StatisticKind, Direction, combine_power_sums,
                    decision_threshold)

DEFAULT_ENUM_CAP = 10**7

METHOD_EXACT = "exact"
METHOD_OPTIMAL = "optimal"
METHOD_STRATEGY = "strategy"


@dataclass(frozen=True)
class TvEstimate:
    """A total variation value with its provenance.

    Monte Carlo noise can push value slightly below 0; it is reported
    as-is so bias checks stay honest.
    """

    value: float
    stderr: float
    method: str
    samples_per_side: int
    seed: int
    stat: StatisticKind | None = None


def _composition_count(n: int, m: int) -> int:
    return math.comb(m + n - 1, n - 1)


def _check_cap(n: int, m: int, cap: int):
    count = _composition_count(n, m)
    if count > cap:
        raise EnumerationTooLarge(
            f"{count} configurations of {m} balls in {n} bins "
            f"exceed the cap {cap}")


def _composition_chunks(n: int, m: int, chunk: int) -> Iterator[np.ndarray]:
    """Weak compositions of m into n parts, colexicographic, in batches."""
    row = np.zeros(n, dtype=np.int64)
    row[0] = m
    buf = []
    while True:
        buf.append(row.copy())
        if len(buf) == chunk:
            yield np.stack(buf)
            buf = []
        # colex successor: move the leftmost nonzero pile one bin right,
        # returning its remainder to bin 0
        i = 0
        while i < n and row[i] == 0:
            i += 1
        if i >= n - 1:
            break
        v = row[i]
        row[i] = 0
        row[0] = v - 1
        row[i + 1] += 1
    if buf:
        yield np.stack(buf)


def enumerate_configurations(n: int, m: int,
                             cap: int = DEFAULT_ENUM_CAP) -> Iterator[Configuration]:
    """Yield every configuration of m balls in n bins exactly once.

    Order is colexicographic, from (m, 0, ..., 0) to (0, ..., 0, m).
    """
    if n < 1:
        raise ValueError("need at least one bin")
    _check_cap(n, m, cap)
    for block in _composition_chunks(n, m, 4096):
        for row in block:
            yield Configuration(z=tuple(int(x) for x in row), m=m)


def exact_tv(planting: Planting, m: int,
             cap: int = DEFAULT_ENUM_CAP) -> TvEstimate:
    """Exact total variation by full enumeration (within the cap)."""
    if m < planting.k:
        raise NotEnoughBalls(f"m = {m} < k = {planting.k}")
    n, k = planting.n, planting.k
    _check_cap(n, m, cap)
    a = planting.counts_array()
    log_n = math.log(n)
    partials = []
    for z in _composition_chunks(n, m, 65536):
        log_st = gammaln(m + 1) - gammaln(z + 1).sum(axis=1) - m * log_n
        p_st = np.exp(log_st)
        p_pl = np.zeros_like(p_st)
        feasible = (z >= a).all(axis=1)
        if feasible.any():
            rest = z[feasible] - a
            log_pl = (gammaln(m - k + 1) - gammaln(rest + 1).sum(axis=1)
                      - (m - k) * log_n)
            p_pl[feasible] = np.exp(log_pl)
        partials.append(float(np.abs(p_st - p_pl).sum()))
    value = 0.5 * math.fsum(partials)
    value = min(max(value, 0.0), 1.0)
    return TvEstimate(value=value, stderr=0.0, method=METHOD_EXACT,
                      samples_per_side=0, seed=0)


def _two_pool_estimate(count_st: int, count_pl: int, samples: int,
                       method: str, seed: int,
                       stat: StatisticKind | None = None) -> TvEstimate:
    p_st = count_st / samples
    p_pl = count_pl / samples
    stderr = math.sqrt(p_st * (1 - p_st) / samples
                       + p_pl * (1 - p_pl) / samples)
    return TvEstimate(value=p_st - p_pl, stderr=stderr, method=method,
                      samples_per_side=samples, seed=seed, stat=stat)


def _count_region(plan: SamplingPlan, samples: int, seed: int, job: int,
                  threads: int | None, in_region) -> tuple[int, int]:
    """Count samples falling in the decision region, per distribution."""
    counts = []
    for dist, side in ((Dist.ST, SIDE_ST), (Dist.PL, SIDE_PL)):
        def worker(chunk, size, dist=dist, side=side):
            rng = chunk_stream(seed, job, side, chunk)
            return int(in_region(dist, rng, size).sum())

        counts.append(sum(run_chunked(worker, samples, threads)))
    return counts[0], counts[1]


def mc_tv_optimal(planting: Planting, m: int, samples: int, seed: int,
                  threads: int | None = None, job: int = 0) -> TvEstimate:
    """Monte Carlo TV through the optimal likelihood-ratio region.

    The region is log-ratio <= 0 (standard at least as likely as planted,
    ties included); the estimate is the standard-pool frequency minus the
    planted-pool frequency, an unbiased estimate of the exact distance.
    """
    if m < planting.k:
        raise NotEnoughBalls(f"m = {m} < k = {planting.k}")
    if samples < 2:
        raise ValueError("need at least 2 samples per side")
    plan = SamplingPlan(planting, m)
    ratio_const = log_falling_factorial_m(planting.k, m, planting.n)

    def in_region(dist, rng, size):
        active = plan.active_counts(dist, rng, size)
        ratios = log_ratio_batch(active, plan.active_planted, ratio_const)
        return ratios <= 0.0

    count_st, count_pl = _count_region(plan, samples, seed, job, threads,
                                       in_region)
    return _two_pool_estimate(count_st, count_pl, samples, METHOD_OPTIMAL,
                              seed)


def mc_tv_strategy(planting: Planting, m: int, kind: StatisticKind,
                   samples: int, seed: int, threads: int | None = None,
                   job: int = 0) -> TvEstimate:
    """Monte Carlo TV through a threshold statistic's decision region.

    Uses the region where the statistic picks the standard distribution;
    this is the strategy-based estimate, a lower bound for the exact
    distance up to sampling noise.
    """
    if kind is StatisticKind.PAIRS:
        raise NoThresholdDefined("pair count has no decision threshold")
    if m < planting.k:
        raise NotEnoughBalls(f"m = {m} < k = {planting.k}")
    if samples < 2:
        raise ValueError("need at least 2 samples per side")
    plan = SamplingPlan(planting, m)
    spec = decision_threshold(planting, m, kind)
    choose_st_high = spec.direction is Direction.CHOOSE_ST_IF_AT_LEAST

    def in_region(dist, rng, size):
        sums = plan.power_sums(dist, rng, size)
        values = combine_power_sums(sums, kind)
        return values >= spec.mu if choose_st_high else values < spec.mu

    count_st, count_pl = _count_region(plan, samples, seed, job, threads,
                                       in_region)
    return _two_pool_estimate(count_st, count_pl, samples, METHOD_STRATEGY,
                              seed, stat=kind)
