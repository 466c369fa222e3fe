"""Deterministic, chunked Monte Carlo execution.

Sampling work is split into fixed-size chunks of CHUNK_SAMPLES draws.  The
stream for a chunk is derived from the master seed by the splittable
construction

    SeedSequence(entropy=seed, spawn_key=(job, side, chunk))

with side 0 for the standard pool and 1 for the planted pool.  Chunk
streams therefore do not depend on the worker count or scheduling, and
chunk results are combined in chunk order, so every run is bit-identical
for a fixed seed whatever --threads says.  No two workers ever share a
stream.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from enum import Enum

import numpy as np

from . import backend
from .model import Planting, PER_BALL_LIMIT_FACTOR, standard_counts, uniform_pvals

CHUNK_SAMPLES = 4096

SIDE_ST = 0
SIDE_PL = 1


class Dist(Enum):
    ST = "st"
    PL = "pl"


def resolve_threads(threads: int | None = None) -> int:
    """Worker count: explicit argument, then PLANTEDBINS_THREADS, then all cores."""
    if threads is None:
        env = os.environ.get("PLANTEDBINS_THREADS")
        if env:
            threads = int(env)
    if threads is None:
        threads = os.cpu_count() or 1
    if threads < 1:
        raise ValueError("thread count must be at least 1")
    return threads


def chunk_stream(seed: int, job: int, side: int, chunk: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(job, side, chunk))
    return np.random.default_rng(ss)


def chunk_sizes(total: int) -> list[int]:
    sizes = [CHUNK_SAMPLES] * (total // CHUNK_SAMPLES)
    if total % CHUNK_SAMPLES:
        sizes.append(total % CHUNK_SAMPLES)
    return sizes


def run_chunked(worker, total: int, threads: int | None = None) -> list:
    """Run worker(chunk_index, chunk_size) over all chunks, results in order."""
    sizes = chunk_sizes(total)
    threads = resolve_threads(threads)
    if threads == 1 or len(sizes) == 1:
        return [worker(i, size) for i, size in enumerate(sizes)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, range(len(sizes)), sizes))


class SamplingPlan:
    """Precomputed arrays for repeatedly sampling one (planting, m) pair."""

    def __init__(self, planting: Planting, m: int):
        self.planting = planting
        self.m = int(m)
        self.n = planting.n
        self.k = planting.k
        self.active_index = planting.active_index()
        counts = planting.counts_array()
        self.active_planted = counts[self.active_index]
        self.weights = self.active_planted.astype(np.float64)
        self.pvals = uniform_pvals(self.n)
        self.n_over_m = self.n / self.m if self.m else float("nan")
        self.m_over_n = self.m / self.n if self.m else 0.0

    def throw_count(self, dist: Dist) -> int:
        return self.m if dist is Dist.ST else self.m - self.k

    def counts(self, dist: Dist, rng: np.random.Generator,
               size: int) -> np.ndarray:
        """Full (size, n) count matrix for one chunk."""
        rest = standard_counts(self.n, self.throw_count(dist), rng, size)
        if dist is Dist.PL:
            rest += self.planting.counts_array()
        return rest

    def active_counts(self, dist: Dist, rng: np.random.Generator,
                      size: int) -> np.ndarray:
        """(size, s) counts at the planted bins only."""
        counts = self.counts(dist, rng, size)
        return np.ascontiguousarray(counts[:, self.active_index])

    def power_sums(self, dist: Dist, rng: np.random.Generator,
                   size: int) -> np.ndarray:
        """(size, 4) per-sample sums a_i * q_i**p, fused when possible.

        The per-ball sampling rule for tiny throws must match counts(), so
        the fused kernel is only used on the binomial-splitting path.
        """
        out = np.empty((size, 4))
        throw = self.throw_count(dist)
        base = (self.active_planted if dist is Dist.PL
                else np.zeros_like(self.active_planted))
        if throw < PER_BALL_LIMIT_FACTOR * self.n:
            rest = standard_counts(self.n, throw, rng, size)
            active = np.ascontiguousarray(rest[:, self.active_index]) + base
            backend.kernels.weighted_power_sums(
                active, self.weights, self.n_over_m, self.m_over_n, out)
            return out
        backend.kernels.sample_power_sums(
            rng, throw, self.pvals, self.active_index, base, self.weights,
            self.n_over_m, self.m_over_n, out)
        return out


def mc_power_sums(plan: SamplingPlan, dist: Dist, samples: int, seed: int,
                  threads: int | None = None, job: int = 0) -> np.ndarray:
    """(samples, 4) power-sum matrix, deterministic in (seed, job)."""
    side = SIDE_ST if dist is Dist.ST else SIDE_PL

    def worker(chunk, size):
        rng = chunk_stream(seed, job, side, chunk)
        return plan.power_sums(dist, rng, size)

    parts = run_chunked(worker, samples, threads)
    return np.concatenate(parts, axis=0)
