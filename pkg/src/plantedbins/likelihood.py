"""Exact log-probabilities, the log-likelihood ratio, and its expansions.

Everything is kept in the log domain; probabilities are only exponentiated
inside the small-instance enumerator.  The ratio of planted to standard
probability reduces to falling factorials of the bin counts:

    planted/standard = n**k * prod_i (z_i)_{a_i} / (m)_k

which is zero (log-ratio minus infinity) whenever some bin holds fewer
balls than were planted in it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NotEnoughBalls, UndefinedErrorTerm
from .model import Configuration, Planting, planting_variance
from .stats import weighted_power_stats


@dataclass(frozen=True)
class LogRatio:
    """Log of planted/standard probability; finite=False marks ratio 0.

    The infinite case is an explicit flag rather than a float -inf so it
    cannot silently flow through arithmetic.
    """

    finite: bool
    value: float = 0.0

    @classmethod
    def neg_inf(cls) -> "LogRatio":
        return cls(finite=False)

    def as_float(self) -> float:
        return self.value if self.finite else -math.inf


def log_prob_st(cfg: Configuration) -> float:
    """Log-probability of a configuration under the standard distribution."""
    n, m = cfg.n, cfg.m
    out = math.lgamma(m + 1) - m * math.log(n)
    for z in cfg.z:
        out -= math.lgamma(z + 1)
    return out


def log_prob_pl(planting: Planting, cfg: Configuration) -> float:
    """Log-probability under the planted distribution; -inf if infeasible."""
    _check_compatible(planting, cfg)
    m, k, n = cfg.m, planting.k, cfg.n
    if any(z < a for z, a in zip(cfg.z, planting.a)):
        return -math.inf
    out = math.lgamma(m - k + 1) - (m - k) * math.log(n)
    for z, a in zip(cfg.z, planting.a):
        out -= math.lgamma(z - a + 1)
    return out


def _check_compatible(planting: Planting, cfg: Configuration):
    from .errors import DimensionMismatch

    if planting.n != cfg.n:
        raise DimensionMismatch(
            f"planting has {planting.n} bins, configuration has {cfg.n}")
    if cfg.m < planting.k:
        raise NotEnoughBalls(f"m = {cfg.m} < k = {planting.k}")


def log_ratio(planting: Planting, cfg: Configuration) -> LogRatio:
    """Log planted/standard ratio via the falling-factorial form.

    k*log(n) + sum_i sum_{j<a_i} log(z_i - j) - sum_{j<k} log(m - j);
    agrees with log_prob_pl - log_prob_st whenever both are finite.
    """
    _check_compatible(planting, cfg)
    if any(z < a for z, a in zip(cfg.z, planting.a)):
        return LogRatio.neg_inf()
    total = log_falling_factorial_m(planting.k, cfg.m, planting.n)
    for z, a in zip(cfg.z, planting.a):
        for j in range(a):
            total += math.log(z - j)
    return LogRatio(finite=True, value=total)


def log_falling_factorial_m(k: int, m: int, n: int) -> float:
    """Constant part of the log-ratio: k*log(n) - log((m)_k)."""
    out = k * math.log(n)
    for j in range(k):
        out -= math.log(m - j)
    return out


def error_term_exact(planting: Planting, cfg: Configuration) -> float:
    """Exact log correction relating the ratio to prod (1+q_i)**a_i.

    log E1 + log E2 where E1 = prod (z_i)_{a_i} / z_i**a_i and
    E2 = m**k / (m)_k.  Requires z_i >= 1 wherever a_i >= 1.
    """
    _check_compatible(planting, cfg)
    m, k = cfg.m, planting.k
    total = 0.0
    for z, a in zip(cfg.z, planting.a):
        if a >= 1 and z == 0:
            raise UndefinedErrorTerm(
                "occupied planted bin is empty in the configuration")
        for j in range(a):
            total += math.log1p(-j / z)
    if k:
        total += k * math.log(m)
        for j in range(k):
            total -= math.log(m - j)
    return total


def error_term_asymptotic(planting: Planting, m: int) -> float:
    """Leading asymptotics of the log correction term.

    -V n**2/(2m) + k n/(2m) + 5 k n**2/(12 m**2) - k**2 n/(4 m**2).
    """
    n, k = planting.n, planting.k
    v = planting_variance(planting)
    return (-v * n * n / (2 * m)
            + k * n / (2 * m)
            + 5 * k * n * n / (12 * m * m)
            - (k * k) * n / (4 * m * m))


def log_ratio_expansion(planting: Planting, cfg: Configuration) -> float:
    """Five-term quadratic approximation of the log-ratio (diagnostic).

    -V n**2/(2m) + k n/(2m) - k**2 n/(4 m**2) plus the linear and half the
    quadratic weighted deviation sums.
    """
    n, k, m = planting.n, planting.k, cfg.m
    v = planting_variance(planting)
    sums = weighted_power_stats(planting, cfg)
    return (-v * n * n / (2 * m)
            + k * n / (2 * m)
            - (k * k) * n / (4 * m * m)
            + float(sums[0]) - 0.5 * float(sums[1]))


def log_ratio_batch(active_counts: np.ndarray, active_planted: np.ndarray,
                    ratio_const: float) -> np.ndarray:
    """Vectorized log-ratio for a batch of active-bin count rows.

    ``active_counts`` is (B, s) int64 at the planted bins, ``active_planted``
    the (s,) planted counts there, ``ratio_const`` the configuration-free
    part from log_falling_factorial_m.  Rows with any z_i < a_i get -inf.
    """
    nrows = active_counts.shape[0]
    out = np.full(nrows, -np.inf)
    if active_planted.size == 0:
        out[:] = ratio_const
        return out
    feasible = (active_counts >= active_planted).all(axis=1)
    rows = active_counts[feasible].astype(np.float64)
    if rows.size:
        total = np.log(rows).sum(axis=1)
        for col in np.flatnonzero(active_planted >= 2):
            zcol = rows[:, col]
            for j in range(1, int(active_planted[col])):
                total += np.log(zcol - j)
        out[feasible] = ratio_const + total
    return out
