"""Normal CDF, asymptotic TV predictions, and moment/normality diagnostics.

The predicted limits depend only on the regime and its scale constant:

    flat          2*Phi(1/(2*sqrt(2)*c)) - 1
    hilly         2*Phi(1/(2*sqrt(c))) - 1
    intermediate  2*Phi(0.5*sqrt(lam/c + 1/(2*c*c))) - 1

The moment predictions give leading-order means and variances of the
weighted deviation power sums under both distributions; the KS check
standardizes a statistic by those predictions and measures its distance
to the standard normal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateStandardization,
    InvalidScale,
    NoThresholdDefined,
    NotEnoughBalls,
    UnsupportedPower,
)
from .mc import Dist, SamplingPlan, mc_power_sums
from .model import Planting, Regime, RegimeSpec, planting_variance
from .stats import StatisticKind, combine_power_sums

_SQRT_2PI = 2.5066282746310002


def std_normal_cdf(x):
    """Standard normal distribution function Phi.

    Rational approximation of the scaled complementary error function
    (Hart 1968 double-precision fit, as in West 2005); absolute error is
    far below the documented 1e-7 contract.  Accepts floats or arrays.
    """
    arr = np.asarray(x, dtype=np.float64)
    z = np.abs(arr)
    tail = np.zeros_like(z)

    near = z < 7.07106781186547
    zn = np.where(near, z, 0.0)
    e = np.exp(-zn * zn / 2.0)
    num = 3.52624965998911e-02 * zn + 0.700383064443688
    for coef in (6.37396220353165, 33.912866078383, 112.079291497871,
                 221.213596169931, 220.206867912376):
        num = num * zn + coef
    den = 8.83883476483184e-02 * zn + 1.75566716318264
    for coef in (16.064177579207, 86.7807322029461, 296.564248779674,
                 637.333633378831, 793.826512519948, 440.413735824752):
        den = den * zn + coef
    tail = np.where(near, e * num / den, tail)

    far = ~near & (z <= 37.0)
    zf = np.where(far, z, 1.0)
    build = zf + 0.65
    for coef in (4.0, 3.0, 2.0, 1.0):
        build = zf + coef / build
    tail = np.where(far, np.exp(-zf * zf / 2.0) / (build * _SQRT_2PI), tail)

    out = np.where(arr > 0, 1.0 - tail, tail)
    if np.isscalar(x) or np.ndim(x) == 0:
        return float(out)
    return out


def predicted_tv(spec: RegimeSpec) -> float:
    """Limiting total variation for a classified, scaled regime."""
    if spec.c is None or spec.c <= 0:
        raise InvalidScale("predicted_tv needs c > 0")
    c = spec.c
    if spec.regime is Regime.FLAT:
        arg = 1.0 / (2.0 * math.sqrt(2.0) * c)
    elif spec.regime is Regime.HILLY:
        arg = 1.0 / (2.0 * math.sqrt(c))
    else:
        if spec.lam < 0:
            raise InvalidScale("intermediate regime needs lam >= 0")
        arg = 0.5 * math.sqrt(spec.lam / c + 1.0 / (2.0 * c * c))
    return 2.0 * std_normal_cdf(arg) - 1.0


def predicted_moments(planting: Planting, m: int, p: int,
                      dist: Dist) -> tuple[float, float]:
    """Leading-order (mean, variance) of sum a_i q_i**p.

    For p in {3, 4} the variance vanishes asymptotically and is reported
    as 0.
    """
    if p not in (1, 2, 3, 4):
        raise UnsupportedPower(f"power {p} not in 1..4")
    if m < 1:
        raise ValueError("m must be at least 1")
    if dist is Dist.PL and m < planting.k:
        raise NotEnoughBalls(f"m = {m} < k = {planting.k}")
    n, k = planting.n, planting.k
    v = planting_variance(planting)
    if p == 1:
        var = v * n * n / m
        mean = 0.0 if dist is Dist.ST else v * n * n / m
        return mean, var
    if p == 2:
        var = 2 * (k * k) * n / (m * m)
        mean = k * n / m
        if dist is Dist.PL:
            mean -= (k * k) * n / (m * m)
        return mean, var
    if p == 3:
        return k * n * n / (m * m), 0.0
    return 3 * k * n * n / (m * m), 0.0


def predicted_statistic_moments(planting: Planting, m: int,
                                kind: StatisticKind,
                                dist: Dist) -> tuple[float, float]:
    """Predicted (mean, variance) for a threshold statistic."""
    if kind is StatisticKind.HILLY_H:
        return predicted_moments(planting, m, 1, dist)
    if kind is StatisticKind.FLAT_F:
        return predicted_moments(planting, m, 2, dist)
    if kind is StatisticKind.INTERMEDIATE_I:
        mean1, var1 = predicted_moments(planting, m, 1, dist)
        mean2, _ = predicted_moments(planting, m, 2, dist)
        n, k = planting.n, planting.k
        # combined variance of the mixture statistic
        var = var1 + (k * k) * n / (2 * m * m)
        return mean1 - 0.5 * mean2, var
    raise NoThresholdDefined("pair count has no moment predictions")


@dataclass(frozen=True)
class MomentReport:
    """Predicted vs measured mean/variance of a power-sum statistic."""

    power: int
    dist: Dist
    predicted_mean: float
    predicted_var: float
    empirical_mean: float
    empirical_var: float
    samples: int
    mean_stderr: float


def empirical_moments(planting: Planting, m: int, p: int, dist: Dist,
                      samples: int, seed: int,
                      threads: int | None = None) -> MomentReport:
    """Sample the statistic and report empirical vs predicted moments."""
    if samples < 2:
        raise ValueError("need at least 2 samples")
    pred_mean, pred_var = predicted_moments(planting, m, p, dist)
    plan = SamplingPlan(planting, m)
    sums = mc_power_sums(plan, dist, samples, seed, threads)
    values = sums[:, p - 1]
    emp_mean = float(np.mean(values))
    emp_var = float(np.var(values, ddof=1))
    return MomentReport(
        power=p, dist=dist,
        predicted_mean=pred_mean, predicted_var=pred_var,
        empirical_mean=emp_mean, empirical_var=emp_var,
        samples=samples, mean_stderr=math.sqrt(emp_var / samples),
    )


def ks_distance_to_normal(values: np.ndarray) -> float:
    """One-sample Kolmogorov-Smirnov distance to the standard normal."""
    x = np.sort(np.asarray(values, dtype=np.float64))
    count = x.shape[0]
    cdf = std_normal_cdf(x)
    steps = np.arange(1, count + 1) / count
    d_plus = float(np.max(steps - cdf))
    d_minus = float(np.max(cdf - (steps - 1.0 / count)))
    return max(d_plus, d_minus)


def ks_normality(planting: Planting, m: int, kind: StatisticKind, dist: Dist,
                 samples: int, seed: int, threshold: float = 0.03,
                 threads: int | None = None) -> tuple[float, bool]:
    """KS distance of the standardized statistic from the normal.

    Standardizes by the predicted mean and variance; passes when the
    distance is below ``threshold`` (default tuned for 1e4 samples, above
    the 5% critical value to absorb finite-size error).
    """
    if samples < 100:
        raise ValueError("need at least 100 samples for a meaningful check")
    mean, var = predicted_statistic_moments(planting, m, kind, dist)
    if var <= 0:
        raise DegenerateStandardization(
            "predicted variance is zero; cannot standardize")
    plan = SamplingPlan(planting, m)
    sums = mc_power_sums(plan, dist, samples, seed, threads)
    values = combine_power_sums(sums, kind)
    standardized = (values - mean) / math.sqrt(var)
    distance = ks_distance_to_normal(standardized)
    return distance, distance < threshold
