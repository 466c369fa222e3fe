#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure numpy fallback.

Covers the three kernel entry points plus an end-to-end strategy-TV
estimate with the backend swapped underneath.  Usage:

    python benchmarks/bench_kernels.py [--quick]
"""

import argparse
import time

import numpy as np

import plantedbins as pb
from plantedbins import backend
from plantedbins.stats import StatisticKind


def best_of(repeats, fn):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_kernels(kernels, n, m, rows, repeats):
    pvals = np.full(n, 1.0 / n)
    out_counts = np.empty((rows, n), np.int64)
    idx = np.arange(n, dtype=np.intp)
    base = np.zeros(n, np.int64)
    weights = np.ones(n)
    out_sums = np.empty((rows, 4))

    def gen():
        return np.random.default_rng(np.random.SeedSequence(12345))

    times = {}
    times["multinomial_fill"] = best_of(
        repeats, lambda: kernels.multinomial_fill(gen(), m, pvals, out_counts))
    kernels.multinomial_fill(gen(), m, pvals, out_counts)
    active = np.ascontiguousarray(out_counts)
    times["weighted_power_sums"] = best_of(
        repeats, lambda: kernels.weighted_power_sums(
            active, weights, n / m, m / n, out_sums))
    times["sample_power_sums"] = best_of(
        repeats, lambda: kernels.sample_power_sums(
            gen(), m, pvals, idx, base, weights, n / m, m / n, out_sums))
    return times


def bench_end_to_end(kernels, samples, repeats):
    planting = pb.make_planting([1] * 1000)
    m = round(1000 * 1000**0.5)
    original = backend.kernels
    backend.kernels = kernels
    try:
        return best_of(repeats, lambda: pb.mc_tv_strategy(
            planting, m, StatisticKind.FLAT_F, samples, seed=1, threads=1))
    finally:
        backend.kernels = original


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true",
                        help="smaller sizes, fewer repeats")
    args = parser.parse_args()

    backends = backend.available_backends()
    if "cython" not in backends:
        print("compiled kernels are not built; timing the python backend only")
    n, m, rows = (500, 11000, 256) if args.quick else (2500, 125000, 1024)
    repeats = 2 if args.quick else 3
    samples = 1000 if args.quick else 4000

    results = {}
    for name, kernels in backends.items():
        times = bench_kernels(kernels, n, m, rows, repeats)
        times["mc_tv_strategy"] = bench_end_to_end(kernels, samples, repeats)
        results[name] = times

    print(f"\nbatch: {rows} samples of {m} balls in {n} bins; "
          f"end-to-end: {samples} samples/side at n=1000")
    header = f"{'kernel':24s}" + "".join(f"{name:>12s}" for name in results)
    if len(results) == 2:
        header += f"{'speedup':>10s}"
    print(header)
    for key in ("multinomial_fill", "weighted_power_sums",
                "sample_power_sums", "mc_tv_strategy"):
        row = f"{key:24s}"
        for name in results:
            row += f"{results[name][key] * 1e3:>10.1f}ms"
        if len(results) == 2:
            ratio = results["python"][key] / results["cython"][key]
            row += f"{ratio:>9.2f}x"
        print(row)


if __name__ == "__main__":
    main()
