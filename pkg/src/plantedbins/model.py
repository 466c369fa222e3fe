"""Core model: plantings, configurations, samplers, and regime scaling.

Two distributions on configurations of m balls in n labeled bins:

* standard -- every ball lands in a uniformly random bin;
* planted  -- a fixed arrangement of k balls is placed first, then the
  remaining m - k balls land uniformly at random.

A planting's unevenness is summarized by the variance V of its per-bin
counts; V * n**1.5 / k is the dimensionless ratio used to classify a
planting as flat, hilly, or intermediate, which in turn fixes how the
ball count m is scaled from the constant c.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from . import backend
from .errors import (
    DegeneratePlanting,
    InvalidPlanting,
    NotEnoughBalls,
    ScaleTooLarge,
)

# Per-ball sampling is cheaper than binomial splitting only for tiny throws.
PER_BALL_LIMIT_FACTOR = 4

DEFAULT_FLAT_CUTOFF = 0.1
DEFAULT_HILLY_CUTOFF = 10.0
DEFAULT_MAX_M = 10**9


class Regime(Enum):
    FLAT = "flat"
    HILLY = "hilly"
    INTERMEDIATE = "intermediate"


@dataclass(frozen=True)
class Planting:
    """Fixed initial arrangement: a[i] balls planted in bin i, k = sum(a)."""

    a: tuple[int, ...]
    n: int
    k: int

    def counts_array(self) -> np.ndarray:
        return np.asarray(self.a, dtype=np.int64)

    def active_index(self) -> np.ndarray:
        """Indices of bins with at least one planted ball, increasing."""
        return np.flatnonzero(self.counts_array()).astype(np.intp)


@dataclass(frozen=True)
class Configuration:
    """Outcome of a throw: z[i] balls in bin i, m = sum(z)."""

    z: tuple[int, ...]
    m: int

    @property
    def n(self) -> int:
        return len(self.z)

    def counts_array(self) -> np.ndarray:
        return np.asarray(self.z, dtype=np.int64)


@dataclass(frozen=True)
class RegimeSpec:
    """Regime tag plus scaling constants.

    c scales the ball count (m = c*k*sqrt(n) for flat/intermediate,
    m = c*V*n**2 for hilly); lam is the limiting ratio for the
    intermediate regime; rho is the measured ratio V*n**1.5/k.
    """

    regime: Regime
    c: float | None = None
    lam: float = 0.0
    rho: float = float("nan")

    def with_c(self, c: float) -> "RegimeSpec":
        return replace(self, c=float(c))


def make_planting(a) -> Planting:
    """Validate per-bin counts and build a Planting."""
    counts = tuple(int(x) for x in a)
    if not counts:
        raise InvalidPlanting("planting needs at least one bin")
    if any(x < 0 for x in counts):
        raise InvalidPlanting("planted counts must be non-negative")
    return Planting(a=counts, n=len(counts), k=sum(counts))


def make_configuration(z) -> Configuration:
    counts = tuple(int(x) for x in z)
    if not counts or any(x < 0 for x in counts):
        raise InvalidPlanting("configuration needs non-negative counts")
    return Configuration(z=counts, m=sum(counts))


def power_sums(planting: Planting) -> tuple[int, int, int, int]:
    """Exact sums of a_i, a_i**2, a_i**3, a_i**4 (arbitrary precision)."""
    s1 = s2 = s3 = s4 = 0
    for x in planting.a:
        x2 = x * x
        s1 += x
        s2 += x2
        s3 += x2 * x
        s4 += x2 * x2
    return s1, s2, s3, s4


def planting_variance(planting: Planting) -> float:
    """Variance V of the per-bin planted counts under a uniform bin index."""
    _, s2, _, _ = power_sums(planting)
    n, k = planting.n, planting.k
    return s2 / n - (k * k) / (n * n)


def classify_regime(planting: Planting,
                    flat_cutoff: float = DEFAULT_FLAT_CUTOFF,
                    hilly_cutoff: float = DEFAULT_HILLY_CUTOFF) -> RegimeSpec:
    """Classify a planting by the ratio rho = V * n**1.5 / k.

    rho below ``flat_cutoff`` is flat, above ``hilly_cutoff`` hilly, and
    anything between is intermediate with lam = rho.  The asymptotic
    trichotomy is about the limit of rho, so finite instances near a
    cutoff are genuinely ambiguous; rho is always reported so callers can
    override.
    """
    n, k = planting.n, planting.k
    if k == 0:
        raise DegeneratePlanting(
            "k = 0: planted and standard distributions coincide")
    if k < 3 * math.sqrt(n):
        warnings.warn(
            f"planting has k={k} < 3*sqrt(n)={3 * math.sqrt(n):.1f}; "
            "asymptotic predictions assume k well above sqrt(n)",
            stacklevel=2,
        )
    rho = planting_variance(planting) * n**1.5 / k
    if rho < flat_cutoff:
        return RegimeSpec(regime=Regime.FLAT, rho=rho)
    if rho > hilly_cutoff:
        return RegimeSpec(regime=Regime.HILLY, rho=rho)
    return RegimeSpec(regime=Regime.INTERMEDIATE, lam=rho, rho=rho)


def _round_half_away(x: float) -> int:
    return int(math.floor(x + 0.5)) if x >= 0 else -int(math.floor(-x + 0.5))


def scale_m(planting: Planting, spec: RegimeSpec,
            max_m: int = DEFAULT_MAX_M) -> int:
    """Ball count for scale constant spec.c, clamped to at least k."""
    from .errors import InvalidScale

    if spec.c is None or spec.c <= 0:
        raise InvalidScale("regime spec needs c > 0")
    n, k = planting.n, planting.k
    if spec.regime is Regime.HILLY:
        target = spec.c * planting_variance(planting) * n * n
    else:
        target = spec.c * k * math.sqrt(n)
    m = max(_round_half_away(target), k)
    if m > max_m:
        raise ScaleTooLarge(f"m = {m} exceeds the maximum {max_m}")
    return m


_PVALS_CACHE: dict[int, np.ndarray] = {}


def uniform_pvals(n: int) -> np.ndarray:
    """Shared read-only uniform probability vector of length n."""
    p = _PVALS_CACHE.get(n)
    if p is None:
        p = np.full(n, 1.0 / n)
        p.flags.writeable = False
        _PVALS_CACHE[n] = p
    return p


def standard_counts(n: int, m: int, rng: np.random.Generator, size: int,
                    method: str = "auto") -> np.ndarray:
    """Batch of ``size`` standard-throw count vectors, shape (size, n).

    method 'split' uses binomial splitting (O(n) per sample regardless of
    m), 'perball' throws the m balls individually, and 'auto' picks
    per-ball only when m < PER_BALL_LIMIT_FACTOR * n.  Both methods
    realize the exact multinomial law.
    """
    if n < 1:
        raise InvalidPlanting("need at least one bin")
    if m < 0:
        raise ValueError("m must be non-negative")
    if method == "auto":
        method = "perball" if m < PER_BALL_LIMIT_FACTOR * n else "split"
    if method == "perball":
        draws = rng.integers(0, n, size=(size, m))
        flat = (draws + n * np.arange(size)[:, None]).ravel()
        return np.bincount(flat, minlength=size * n).reshape(size, n)
    if method != "split":
        raise ValueError(f"unknown sampling method {method!r}")
    out = np.empty((size, n), dtype=np.int64)
    backend.kernels.multinomial_fill(rng, m, uniform_pvals(n), out)
    return out


def planted_counts(planting: Planting, m: int, rng: np.random.Generator,
                   size: int, method: str = "auto") -> np.ndarray:
    """Batch of planted-throw count vectors: planting plus m - k random."""
    if m < planting.k:
        raise NotEnoughBalls(f"m = {m} < k = {planting.k}")
    rest = standard_counts(planting.n, m - planting.k, rng, size, method)
    return rest + planting.counts_array()


def sample_st(n: int, m: int, rng: np.random.Generator) -> Configuration:
    """One configuration from the standard distribution."""
    row = standard_counts(n, m, rng, size=1)[0]
    return Configuration(z=tuple(int(x) for x in row), m=int(m))


def sample_pl(planting: Planting, m: int,
              rng: np.random.Generator) -> Configuration:
    """One configuration from the planted distribution (requires m >= k)."""
    row = planted_counts(planting, m, rng, size=1)[0]
    return Configuration(z=tuple(int(x) for x in row), m=int(m))


def load_planting(path) -> Planting:
    """Read a planting from JSON.

    Accepted forms: {"n": 4, "a": [1, 0, 2, 0]} or the sparse form
    {"n": 4, "sparse": {"0": 1, "2": 2}} with omitted indices zero
    (0-based indices).
    """
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    try:
        n = int(doc["n"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidPlanting(f"{path}: missing or invalid 'n'") from exc
    if n < 1:
        raise InvalidPlanting(f"{path}: n must be positive")
    if "a" in doc:
        a = doc["a"]
        if not isinstance(a, list) or len(a) != n:
            raise InvalidPlanting(f"{path}: 'a' must be a list of length n")
        return make_planting(a)
    if "sparse" in doc:
        counts = [0] * n
        for key, value in doc["sparse"].items():
            idx = int(key)
            if not 0 <= idx < n:
                raise InvalidPlanting(f"{path}: sparse index {idx} out of range")
            counts[idx] = int(value)
        return make_planting(counts)
    raise InvalidPlanting(f"{path}: need either 'a' or 'sparse'")


def planting_from_source(source: str, n: int | None = None) -> Planting:
    """Build a planting from a generator string.

    Supported: "flat:<k>" (k/n balls in every bin; k must be a multiple
    of n), "singlebin:<k>" (all k balls in bin 0), "file:<path>".
    """
    kind, sep, arg = source.partition(":")
    if not sep:
        raise InvalidPlanting(f"planting source needs a ':': {source!r}")
    if kind == "file":
        planting = load_planting(arg)
        if n is not None and planting.n != n:
            raise InvalidPlanting(
                f"{arg}: file has n={planting.n}, expected n={n}")
        return planting
    try:
        k = int(arg)
    except ValueError as exc:
        raise InvalidPlanting(f"bad count in planting source {source!r}") from exc
    if k < 0:
        raise InvalidPlanting("planted ball count must be non-negative")
    if n is None:
        raise InvalidPlanting(f"planting source {source!r} needs n")
    if kind == "flat":
        if n == 0 or k % n != 0:
            raise InvalidPlanting(
                f"flat:{k} has no even arrangement over n={n} bins")
        return make_planting([k // n] * n)
    if kind == "singlebin":
        return make_planting([k] + [0] * (n - 1))
    raise InvalidPlanting(f"unknown planting source kind {kind!r}")
