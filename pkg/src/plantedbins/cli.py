"""Command-line front end.

Subcommands: predict, exact-tv, mc-tv, moments, normality, error-term,
sweep.  Data goes to stdout (or --out); diagnostics go to stderr, so
redirected output is always machine-readable.  Exit codes: 0 success,
1 usage error, 2 runtime error.

Runs are reproducible: a single master seed drives every stream through
the splittable construction documented in plantedbins.mc, and output is
byte-identical for any --threads value.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import asymptotics, likelihood, tv
from .errors import PlantedBinsError
from .mc import Dist, chunk_stream
from .model import (
    Planting,
    Regime,
    RegimeSpec,
    classify_regime,
    planting_from_source,
    planting_variance,
    sample_st,
    scale_m,
)
from .stats import StatisticKind

CSV_HEADER = ["c", "m", "n", "k", "V", "regime", "rho", "method", "stat",
              "tv", "stderr", "tv_predicted", "samples", "seed"]

_METHOD_ORDER = {tv.METHOD_EXACT: 0, tv.METHOD_OPTIMAL: 1, tv.METHOD_STRATEGY: 2}
_STAT_BY_FLAG = {"f": StatisticKind.FLAT_F, "h": StatisticKind.HILLY_H,
                 "i": StatisticKind.INTERMEDIATE_I}
_DEFAULT_STAT = {Regime.FLAT: StatisticKind.FLAT_F,
                 Regime.HILLY: StatisticKind.HILLY_H,
                 Regime.INTERMEDIATE: StatisticKind.INTERMEDIATE_I}


@dataclass
class SweepSpec:
    """One sweep: a planting, a c grid, and the methods to run per c."""

    planting: Planting
    c_values: list[float]
    samples: int
    seed: int
    methods: list[str]
    stat_flag: str = "auto"
    regime_override: Regime | None = None
    flat_cutoff: float = 0.1
    hilly_cutoff: float = 10.0
    threads: int | None = None
    max_m: int = 10**9
    extra: dict = field(default_factory=dict)


def run_sweep(spec: SweepSpec) -> list[dict]:
    """Rows for every (c, method) cell, ordered by (c, method)."""
    if not spec.c_values or any(c <= 0 for c in spec.c_values):
        raise ValueError("c values must be positive and non-empty")
    if spec.samples < 2:
        raise ValueError("need at least 2 samples per side")
    if not spec.methods:
        raise ValueError("need at least one method")
    planting = spec.planting
    base = classify_regime(planting, spec.flat_cutoff, spec.hilly_cutoff)
    if spec.regime_override is not None:
        lam = base.rho if spec.regime_override is Regime.INTERMEDIATE else 0.0
        base = RegimeSpec(regime=spec.regime_override, lam=lam, rho=base.rho)
    v = planting_variance(planting)
    methods = sorted(set(spec.methods), key=_METHOD_ORDER.__getitem__)
    cells = [(c, method) for c in sorted(spec.c_values) for method in methods]
    rows = []
    for job, (c, method) in enumerate(cells):
        regime_spec = base.with_c(c)
        m = scale_m(planting, regime_spec, max_m=spec.max_m)
        predicted = asymptotics.predicted_tv(regime_spec)
        if method == tv.METHOD_EXACT:
            estimate = tv.exact_tv(planting, m)
        elif method == tv.METHOD_OPTIMAL:
            estimate = tv.mc_tv_optimal(planting, m, spec.samples, spec.seed,
                                        threads=spec.threads, job=job)
        else:
            if spec.stat_flag == "auto":
                kind = _DEFAULT_STAT[regime_spec.regime]
            else:
                kind = _STAT_BY_FLAG[spec.stat_flag]
            estimate = tv.mc_tv_strategy(planting, m, kind, spec.samples,
                                         spec.seed, threads=spec.threads,
                                         job=job)
        rows.append({
            "c": c,
            "m": m,
            "n": planting.n,
            "k": planting.k,
            "V": v,
            "regime": regime_spec.regime.value,
            "rho": base.rho,
            "method": method,
            "stat": estimate.stat.value if estimate.stat else "",
            "tv": estimate.value,
            "stderr": estimate.stderr,
            "tv_predicted": predicted,
            "samples": estimate.samples_per_side,
            "seed": spec.seed,
        })
    return rows


def _format_cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow([_format_cell(row[key]) for key in CSV_HEADER])
    return buf.getvalue()


def rows_to_json(rows: list[dict]) -> str:
    ordered = [{key: row[key] for key in CSV_HEADER} for row in rows]
    return json.dumps(ordered, indent=2) + "\n"


class _Parser(argparse.ArgumentParser):
    """argparse parser that exits 1 (not 2) on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _add_planting_args(sub, with_scale=True):
    sub.add_argument("--planting", required=True,
                     help="flat:<k>, singlebin:<k>, or file:<path>")
    sub.add_argument("--n", type=int, required=True, help="number of bins")
    if with_scale:
        group = sub.add_mutually_exclusive_group(required=True)
        group.add_argument("--m", type=int, help="total number of balls")
        group.add_argument("--c", type=float,
                           help="scale constant; m is derived from the regime")
        sub.add_argument("--regime", choices=[r.value for r in Regime],
                         help="override the classified regime")


def _resolve_planting(args, parser) -> Planting:
    try:
        return planting_from_source(args.planting, args.n)
    except PlantedBinsError as exc:
        parser.error(str(exc))


def _resolve_m(planting, args, parser) -> int:
    if args.m is not None:
        if args.m < 0:
            parser.error("--m must be non-negative")
        return args.m
    if args.c <= 0:
        parser.error("--c must be positive")
    spec = classify_regime(planting)
    if args.regime:
        spec = RegimeSpec(regime=Regime(args.regime), lam=spec.rho,
                          rho=spec.rho)
    return scale_m(planting, spec.with_c(args.c))


def _cmd_predict(args, parser):
    if args.c <= 0:
        parser.error("--c must be positive")
    lam = args.lam if args.lam is not None else 0.0
    if lam < 0:
        parser.error("--lambda must be non-negative")
    spec = RegimeSpec(regime=Regime(args.regime), c=args.c, lam=lam)
    print(f"{asymptotics.predicted_tv(spec):.4g}")
    return 0


def _cmd_exact_tv(args, parser):
    planting = _resolve_planting(args, parser)
    m = _resolve_m(planting, args, parser)
    estimate = tv.exact_tv(planting, m, cap=args.cap)
    print(repr(estimate.value))
    return 0


def _cmd_mc_tv(args, parser):
    if args.samples < 2:
        parser.error("--samples must be at least 2")
    planting = _resolve_planting(args, parser)
    m = _resolve_m(planting, args, parser)
    threads = args.threads
    if args.method == "optimal":
        estimate = tv.mc_tv_optimal(planting, m, args.samples, args.seed,
                                    threads=threads)
    else:
        if args.stat == "auto":
            kind = _DEFAULT_STAT[classify_regime(planting).regime]
        else:
            kind = _STAT_BY_FLAG[args.stat]
        estimate = tv.mc_tv_strategy(planting, m, kind, args.samples,
                                     args.seed, threads=threads)
    print(f"{estimate.value!r} {estimate.stderr!r}")
    return 0


def _cmd_moments(args, parser):
    if args.samples < 2:
        parser.error("--samples must be at least 2")
    planting = _resolve_planting(args, parser)
    m = _resolve_m(planting, args, parser)
    report = asymptotics.empirical_moments(
        planting, m, args.power, Dist(args.dist), args.samples, args.seed,
        threads=args.threads)
    print(f"predicted_mean={report.predicted_mean!r} "
          f"empirical_mean={report.empirical_mean!r} "
          f"mean_stderr={report.mean_stderr!r} "
          f"predicted_var={report.predicted_var!r} "
          f"empirical_var={report.empirical_var!r} "
          f"samples={report.samples}")
    return 0


def _cmd_normality(args, parser):
    if args.samples < 100:
        parser.error("--samples must be at least 100")
    planting = _resolve_planting(args, parser)
    m = _resolve_m(planting, args, parser)
    kind = _STAT_BY_FLAG[args.stat]
    distance, passed = asymptotics.ks_normality(
        planting, m, kind, Dist(args.dist), args.samples, args.seed,
        threshold=args.threshold, threads=args.threads)
    print(f"D={distance!r} pass={'true' if passed else 'false'}")
    return 0


def _cmd_error_term(args, parser):
    planting = _resolve_planting(args, parser)
    m = _resolve_m(planting, args, parser)
    asym = likelihood.error_term_asymptotic(planting, m)
    line = f"asymptotic={asym!r}"
    if args.samples:
        if args.samples < 1:
            parser.error("--samples must be positive")
        gaps = []
        exacts = []
        rng = chunk_stream(args.seed, 0, 0, 0)
        for _ in range(args.samples):
            cfg = sample_st(planting.n, m, rng)
            term = likelihood.error_term_exact(planting, cfg)
            exacts.append(term)
            gaps.append(abs(term - asym))
        line += (f" empirical_mean={float(np.mean(exacts))!r}"
                 f" mean_abs_gap={float(np.mean(gaps))!r}")
    print(line)
    return 0


def _cmd_sweep(args, parser):
    if args.samples < 2:
        parser.error("--samples must be at least 2")
    try:
        c_values = [float(part) for part in args.c.split(",") if part]
    except ValueError:
        parser.error("--c must be a comma-separated list of numbers")
    if not c_values or any(c <= 0 for c in c_values):
        parser.error("--c values must be positive")
    methods = [part for part in args.methods.split(",") if part]
    if not methods or any(method not in _METHOD_ORDER for method in methods):
        parser.error("--methods must name exact, optimal, and/or strategy")
    planting = _resolve_planting(args, parser)
    spec = SweepSpec(
        planting=planting,
        c_values=c_values,
        samples=args.samples,
        seed=args.seed,
        methods=methods,
        stat_flag=args.stat,
        regime_override=Regime(args.regime) if args.regime else None,
        threads=args.threads,
    )
    rows = run_sweep(spec)
    text = rows_to_csv(rows) if args.format == "csv" else rows_to_json(rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        print(f"wrote {len(rows)} rows to {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="plantedbins",
                     description="Planted balls-and-bins experiments")
    subs = parser.add_subparsers(dest="command", required=True,
                                 parser_class=_Parser)

    p = subs.add_parser("predict", help="limiting TV for a regime and c")
    p.add_argument("--regime", choices=[r.value for r in Regime],
                   required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="intermediate-regime constant")
    p.set_defaults(handler=_cmd_predict)

    p = subs.add_parser("exact-tv", help="exact TV by enumeration")
    _add_planting_args(p)
    p.add_argument("--cap", type=int, default=tv.DEFAULT_ENUM_CAP,
                   help="max number of configurations to enumerate")
    p.set_defaults(handler=_cmd_exact_tv)

    p = subs.add_parser("mc-tv", help="Monte Carlo TV estimate")
    _add_planting_args(p)
    p.add_argument("--samples", type=int, required=True,
                   help="samples per distribution")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--method", choices=["optimal", "strategy"],
                   default="optimal")
    p.add_argument("--stat", choices=["auto", "f", "h", "i"], default="auto",
                   help="statistic for --method strategy")
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(handler=_cmd_mc_tv)

    p = subs.add_parser("moments", help="empirical vs predicted moments")
    _add_planting_args(p)
    p.add_argument("--power", type=int, choices=[1, 2, 3, 4], required=True)
    p.add_argument("--dist", choices=["st", "pl"], required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(handler=_cmd_moments)

    p = subs.add_parser("normality", help="KS distance of a statistic")
    _add_planting_args(p)
    p.add_argument("--stat", choices=["f", "h", "i"], required=True)
    p.add_argument("--dist", choices=["st", "pl"], required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threshold", type=float, default=0.03)
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(handler=_cmd_normality)

    p = subs.add_parser("error-term", help="log correction term")
    _add_planting_args(p)
    p.add_argument("--samples", type=int, default=0,
                   help="also sample the exact term this many times")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=_cmd_error_term)

    p = subs.add_parser("sweep", help="TV-vs-c sweep with CSV/JSON output")
    p.add_argument("--planting", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--c", required=True,
                   help="comma-separated list of scale constants")
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--methods", default="optimal",
                   help="comma-separated subset of exact,optimal,strategy")
    p.add_argument("--stat", choices=["auto", "f", "h", "i"], default="auto")
    p.add_argument("--regime", choices=[r.value for r in Regime],
                   help="override the classified regime")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", default=None)
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(handler=_cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args, parser)
    except PlantedBinsError as exc:
        print(f"plantedbins: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"plantedbins: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
