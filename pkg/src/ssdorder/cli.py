"""Command-line front end: ``ssdorder <command> [options]``.

Every report carries the seed it was produced with.  JSON output is written
with sorted keys, so equal inputs give byte-identical output.  The exit
status is 0 whenever the command ran (a statistical rejection is a result,
not a failure), 1 for operational errors and 2 for usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from .catalog import ParametricDistribution, ParseError, member_classes, parse_distribution, parse_spec
from .conditions import corollary1, corollary2, min_rank, param_range_search, scan_ranks
from .convexity import (TABLE2_LEVELS, TABLE2_SIZES, TABLE3_FAMILIES, TABLE3_SIZES, NodeConvention,
                        convexity_test, null_distribution, null_quantile_table, power_study,
                        write_table2_csv, write_table3_csv)
from .dominance import DominanceError, cdf_crossings, dominance_degree, ssd_order_statistics
from .reference import ConvexityClass, OrderStatSpec

DEFAULT_SEED = 0
DEFAULT_RUNS = 3000
DEFAULT_ALPHA = 0.1


class UsageError(Exception):
    """Bad command-line input detected after argument parsing."""


@dataclass(frozen=True)
class RunConfig:
    seed: int = DEFAULT_SEED
    runs: int = DEFAULT_RUNS
    alpha: float = DEFAULT_ALPHA
    output_format: str = "json"
    cache_dir: Path | None = None
    workers: int = 1

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise UsageError("--alpha must lie in (0, 1)")
        if self.runs < 1:
            raise UsageError("--runs must be >= 1")
        if self.workers < 1:
            raise UsageError("--workers must be >= 1")


# output ----------------------------------------------------------------------

def _clean(obj: Any) -> Any:
    """Make values JSON-safe: non-finite floats become strings, numpy scalars plain."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else ("inf" if v > 0 else "-inf" if v < 0 else "nan")
    return obj


def _flatten(obj: Any, prefix: str = "") -> list[tuple[str, Any]]:
    if isinstance(obj, dict):
        out = []
        for k in sorted(obj):
            out.extend(_flatten(obj[k], f"{prefix}.{k}" if prefix else str(k)))
        return out
    if isinstance(obj, list):
        out = []
        for k, v in enumerate(obj):
            out.extend(_flatten(v, f"{prefix}[{k}]"))
        return out
    return [(prefix, obj)]


def render(report: dict, fmt: str, table_csv: str | None = None) -> str:
    report = _clean(report)
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        if table_csv is not None:
            return table_csv
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        w.writerows(_flatten(report))
        return buf.getvalue()
    return "".join(f"{k}: {v}\n" for k, v in _flatten(report))


def _report(command: str, cfg: RunConfig, result: dict, stochastic: bool) -> dict:
    return {
        "command": command,
        "version": __version__,
        "seed": cfg.seed,
        "stochastic": stochastic,
        "result": result,
    }


# helpers ---------------------------------------------------------------------

def _spec(i: int, n: int, label: str) -> OrderStatSpec:
    try:
        return OrderStatSpec(i, n)
    except ValueError as exc:
        raise UsageError(f"{label}: {exc}") from None


def _dist(text: str, flag: str) -> ParametricDistribution:
    try:
        return parse_distribution(text)
    except ParseError as exc:
        raise UsageError(f"{flag}: {exc}") from None


def _read_sample(path: str) -> np.ndarray:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    values = []
    for lineno, line in enumerate(text.splitlines(), 1):
        for cell in line.replace(";", ",").split(","):
            cell = cell.strip()
            if not cell or cell.startswith("#"):
                continue
            try:
                values.append(float(cell))
            except ValueError:
                if not values and lineno == 1:
                    continue  # header row
                raise ValueError(f"{path}:{lineno}: not a number: {cell!r}") from None
    return np.asarray(values, dtype=float)


def _class_of(flag: str | None) -> ConvexityClass | None:
    if flag is None:
        return None
    try:
        return ConvexityClass.parse(flag)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# commands --------------------------------------------------------------------

def cmd_compare(args, cfg: RunConfig) -> dict:
    si = _spec(args.i, args.n, "--i/--n")
    sj = _spec(args.j, args.m, "--j/--m")
    cls = _class_of(args.cls)
    dX = _dist(args.x, "--x") if args.x else None
    dY = _dist(args.y, "--y") if args.y else None
    result: dict[str, Any] = {"i": si.i, "n": si.n, "j": sj.i, "m": sj.n}

    if dY is None:
        # one sample: the parent is X (if given)
        if cls is not None:
            classes, source = [cls], "given"
        elif dX is not None:
            classes, source = member_classes(dX), "catalog"
        else:
            classes, source = list(ConvexityClass), "all"
        verdicts = {c.value: corollary1(c, si, sj).as_dict() for c in classes}
        result.update(mode="one-sample", x=str(dX) if dX else None, classes_from=source, verdicts=verdicts,
                      certified=any(v["certified"] for v in verdicts.values()))
        if args.verify and dX is not None:
            res = ssd_order_statistics(dX, si, dX, sj)
            result["numeric_check"] = {"verdict": res.verdict.value, "worst_x": res.worst_x,
                                       "worst_value": res.worst_value, "error": res.error_estimate}
        return result

    if dX is None:
        raise UsageError("a two-sample comparison needs --x as well as --y")
    classes = [cls] if cls is not None else member_classes(dY)
    crossing = cdf_crossings(dX, dY)
    result.update(mode="two-sample", x=str(dX), y=str(dY), classes_from="given" if cls else "catalog",
                  crossing={"count": crossing.count, "first_sign": crossing.first_sign.value,
                            "locations": list(crossing.crossing_locations)})
    try:
        degree = dominance_degree(dX, dY, k_max=max(args.k_max, si.i), crossing=crossing)
    except DominanceError as exc:
        result.update(degree=None, degree_error=str(exc), verdicts={}, certified=False)
        return result
    result["degree"] = {"k": degree.k, "fsd": degree.fsd, "exhausted": degree.exhausted,
                        "certified_up_to": degree.certified_up_to}
    verdicts = {c.value: corollary2(c, degree, si, sj).as_dict() for c in classes}
    result.update(verdicts=verdicts, certified=any(v["certified"] for v in verdicts.values()))
    if args.verify:
        res = ssd_order_statistics(dX, si, dY, sj)
        result["numeric_check"] = {"verdict": res.verdict.value, "worst_x": res.worst_x,
                                   "worst_value": res.worst_value, "error": res.error_estimate}
    return result


def cmd_test_convexity(args, cfg: RunConfig) -> tuple[dict, str | None]:
    sample = _read_sample(args.sample)
    null = null_distribution(args.transform, sample.size, cfg.runs, cfg.seed, args.nodes,
                             cfg.cache_dir, cfg.workers)
    res = convexity_test(sample, args.transform, null, cfg.alpha)
    out = res.as_dict()
    out["low_precision"] = null.low_precision
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "step", "gcm"])
    for x, s, g in res.nodes:
        w.writerow([repr(x), repr(s), repr(g)])
    return out, buf.getvalue()


def cmd_null_table(args, cfg: RunConfig) -> tuple[dict, str]:
    null = null_distribution(args.transform, args.size, cfg.runs, cfg.seed, args.nodes,
                             cfg.cache_dir, cfg.workers)
    levels = list(TABLE2_LEVELS)
    out = {"transform": null.kind.value, "n": null.n, "runs": null.runs, "nodes": null.convention.value,
           "low_precision": null.low_precision,
           "quantiles": {f"{p:g}": float(q) for p, q in zip(levels, null.quantile(levels))},
           "critical_value": null.critical_value(cfg.alpha), "alpha": cfg.alpha}
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["kind", "n", "runs", "seed", "statistic"])
    for v in null.values:
        w.writerow([null.kind.value, null.n, null.runs, null.seed, repr(float(v))])
    return out, buf.getvalue()


def cmd_tables(args, cfg: RunConfig) -> tuple[dict, str]:
    buf = io.StringIO()
    if args.which == "table2":
        sizes = args.sizes or list(TABLE2_SIZES)
        table = null_quantile_table(args.transform, sizes, TABLE2_LEVELS, cfg.runs, cfg.seed, args.nodes,
                                    cfg.cache_dir, cfg.workers)
        write_table2_csv(table, TABLE2_LEVELS, cfg.runs, buf)
        out = {"table": "table2", "runs": cfg.runs, "low_precision": cfg.runs < 500, "nodes": args.nodes,
               "levels": list(TABLE2_LEVELS),
               "quantiles": {str(n): v for n, v in table.items()}}
        return out, buf.getvalue()
    sizes = args.sizes or list(TABLE3_SIZES)
    cells = power_study(TABLE3_FAMILIES, sizes, args.replicates, cfg.alpha, cfg.runs, cfg.seed, args.transform,
                        args.nodes, cfg.cache_dir, cfg.workers)
    write_table3_csv(cells, buf)
    out = {"table": "table3", "runs": cfg.runs, "alpha": cfg.alpha, "replicates": args.replicates,
           "low_precision": cfg.runs < 500, "nodes": args.nodes,
           "cells": [{"family": c.family, "n": c.n, "mean_p": c.mean_p, "sd_p": c.sd_p,
                      "acceptance": c.acceptance} for c in cells]}
    return out, buf.getvalue()


def cmd_min_rank(args, cfg: RunConfig) -> dict:
    cls = _class_of(args.cls)
    sj = _spec(args.j, args.m, "--j/--m")
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    trace = [{"i": i, "certified": v.certified, "lhs": v.lhs, "rhs": v.rhs} for i, v in scan_ranks(cls, args.n, sj)]
    best = min_rank(cls, args.n, sj)
    return {"class": cls.value, "n": args.n, "j": sj.i, "m": sj.n, "min_rank": best, "found": best is not None,
            "trace": trace}


def cmd_param_range(args, cfg: RunConfig) -> dict:
    try:
        family, params = parse_spec(args.x)
    except ParseError as exc:
        raise UsageError(f"--x: {exc}") from None
    free = args.free
    params.pop(free, None)

    def template(value: float) -> ParametricDistribution:
        return ParametricDistribution(family, {**params, free: value})

    try:
        template(0.5 * (args.bounds[0] + args.bounds[1]))
    except ValueError as exc:
        raise UsageError(f"--x/--free: {exc}") from None
    dY = _dist(args.y, "--y")
    si = _spec(args.i, args.n, "--i/--n")
    sj = _spec(args.j, args.m, "--j/--m")
    cls = _class_of(args.cls)
    if cls is None:
        candidates = [c for c in member_classes(dY) if corollary1(c, si, sj).certified]
        if not candidates:
            raise DominanceError(f"no class condition of {dY} certifies {si} against {sj}")
        cls = candidates[0]
    rng = param_range_search(template, dY, si, sj, cls, tuple(args.bounds), args.resolution)
    return {"x": args.x, "free": free, "y": str(dY), "i": si.i, "n": si.n, "j": sj.i, "m": sj.n,
            "class": cls.value, "bounds": list(args.bounds), "lower": rng.lower, "upper": rng.upper,
            "resolution": rng.resolution, "disjoint": rng.disjoint,
            "trace": [{"value": t, "certified": ok, "reason": why} for t, ok, why in rng.evaluations]}


# parser ------------------------------------------------------------------------

def _common(sup: bool) -> argparse.ArgumentParser:
    """Global options, accepted before or after the subcommand."""
    d = (lambda v: argparse.SUPPRESS) if sup else (lambda v: v)
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=d(DEFAULT_SEED), help=f"random seed (default {DEFAULT_SEED})")
    p.add_argument("--runs", type=int, default=d(DEFAULT_RUNS), help="null-distribution simulation runs")
    p.add_argument("--alpha", type=float, default=d(DEFAULT_ALPHA), help="test level in (0, 1)")
    p.add_argument("--format", dest="output_format", choices=("json", "csv", "text"), default=d("json"))
    p.add_argument("--cache-dir", type=Path, default=d(None), help="directory for cached null tables")
    p.add_argument("--workers", type=int, default=d(1), help="processes for null simulation")
    p.add_argument("-v", "--verbose", action="store_true", default=d(False))
    return p


def _transform_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--c", dest="transform", action="store_const", const="uniform", help="test convexity of F")
    g.add_argument("--ifr", dest="transform", action="store_const", const="exponential", help="test IFR")
    g.add_argument("--co", dest="transform", action="store_const", const="odds", help="test convex odds (default)")
    p.set_defaults(transform="odds")
    p.add_argument("--nodes", choices=[c.value for c in NodeConvention], default=NodeConvention.ANCHORED.value,
                   help="GCM node convention")


def build_parser() -> argparse.ArgumentParser:
    common = _common(sup=True)
    parser = argparse.ArgumentParser(prog="ssdorder", parents=[_common(sup=False)],
                                     description="Second-order dominance of order statistics and convexity tests.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def ranks(p, with_i=True):
        if with_i:
            p.add_argument("--i", type=int, required=True, help="rank of the dominating order statistic")
        p.add_argument("--n", type=int, required=True, help="its sample size")
        p.add_argument("--j", type=int, required=True, help="rank of the dominated order statistic")
        p.add_argument("--m", type=int, required=True, help="its sample size")

    p = sub.add_parser("compare", parents=[common], help="check X_{i:n} >=_2 Y_{j:m}")
    ranks(p)
    p.add_argument("--class", dest="cls", help="convexity class of the parent (c, cl, ifr, co)")
    p.add_argument("--x", help="distribution of X, e.g. 'gamma(a=2,b=2)'")
    p.add_argument("--y", help="distribution of Y (two-sample comparison)")
    p.add_argument("--k-max", type=int, default=50, help="largest degree examined (two-sample)")
    p.add_argument("--verify", action="store_true", help="also run the numerical SSD check")
    p.set_defaults(func=cmd_compare, stochastic=False)

    p = sub.add_parser("test-convexity", parents=[common], help="test H^{-1}-convexity of a sample")
    p.add_argument("sample", help="file with one value per line or CSV cell ('-' for stdin)")
    _transform_flags(p)
    p.set_defaults(func=cmd_test_convexity, stochastic=True)

    p = sub.add_parser("null-table", parents=[common], help="simulate the null distribution for one n")
    p.add_argument("--size", "-N", type=int, required=True, help="sample size n")
    _transform_flags(p)
    p.set_defaults(func=cmd_null_table, stochastic=True)

    p = sub.add_parser("tables", parents=[common], help="regenerate the quantile table or the power study")
    p.add_argument("which", choices=("table2", "table3"))
    p.add_argument("--sizes", type=int, nargs="+", help="override the sample sizes")
    p.add_argument("--replicates", type=int, default=100, help="samples per cell (table3)")
    _transform_flags(p)
    p.set_defaults(func=cmd_tables, stochastic=True)

    p = sub.add_parser("min-rank", parents=[common], help="smallest i certified by a class condition")
    p.add_argument("--class", dest="cls", required=True, help="c, cl, ifr or co")
    ranks(p, with_i=False)
    p.set_defaults(func=cmd_min_rank, stochastic=False)

    p = sub.add_parser("param-range", parents=[common], help="range of a free parameter of X that is certified")
    ranks(p)
    p.add_argument("--x", required=True, help="template for X, e.g. 'loglogistic(b=2)'")
    p.add_argument("--free", required=True, help="name of the free parameter, e.g. a")
    p.add_argument("--y", required=True, help="distribution of Y")
    p.add_argument("--bounds", type=float, nargs=2, required=True, metavar=("LO", "HI"))
    p.add_argument("--class", dest="cls", help="class of Y (default: first certifying class from the catalog)")
    p.add_argument("--resolution", type=float, default=1e-3)
    p.set_defaults(func=cmd_param_range, stochastic=False)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        cfg = RunConfig(args.seed, args.runs, args.alpha, args.output_format, args.cache_dir, args.workers)
        out = args.func(args, cfg)
        table = None
        if isinstance(out, tuple):
            out, table = out
        sys.stdout.write(render(_report(args.command, cfg, out, args.stochastic), cfg.output_format, table))
        return 0
    except UsageError as exc:
        print(f"ssdorder: usage error: {exc}", file=sys.stderr)
        return 2
    except (DominanceError, ValueError, OSError, ArithmeticError) as exc:
        print(f"ssdorder: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
