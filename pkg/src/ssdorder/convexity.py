"""Goodness-of-fit test for H^{-1}-convexity of an unknown parent CDF.

Under ``H0: H^{-1}(F)`` convex, the transformed empirical CDF
``H^{-1}(F_n)`` should stay close to its greatest convex minorant (GCM).
The test statistic is a weighted Kolmogorov-Smirnov distance between the
two, evaluated at the sample points.  Its null distribution is simulated
from ``H`` itself, which is least favourable within the null class, so the
critical values below are conservative for every member of the class.

Node conventions
----------------
The GCM is taken over one point per order statistic.  Two conventions are
implemented:

``anchored`` (default)
    ``(x_1, H^{-1}(0))``, ``(x_j, h_j)`` for ``2 <= j <= n-1`` and
    ``(x_n, h_{n-1})``, where ``h_k = H^{-1}(k/n)``.  The curve starts at the
    reference origin and the infinite top value ``H^{-1}(1)`` is replaced by
    its left limit.  This convention reproduces the published null quantiles.
``lagged``
    ``(x_1, h_1)`` and ``(x_j, h_{j-1})`` for ``j >= 2``, the left limits of
    the step function.

In both cases the statistic is ``max_{2 <= j <= n-1} w_j (y_j - g(x_j))``
where ``y_j`` is the node height and ``w_j = 1/y_j`` for the exponential and
odds references (``w_j = 1`` for the uniform one), so it lies in ``[0, 1]``.
"""
from __future__ import annotations

import csv
import enum
import logging
import math
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .catalog import ParametricDistribution
from .reference import ReferenceTransform, TransformKind

logger = logging.getLogger(__name__)

MIN_RUNS = 500
ADVISORY_THRESHOLD = 0.9


class NodeConvention(enum.Enum):
    ANCHORED = "anchored"
    LAGGED = "lagged"

    @classmethod
    def of(cls, value) -> "NodeConvention":
        return value if isinstance(value, cls) else cls(str(value).lower())


class DegenerateSampleError(ValueError):
    """Fewer than three distinct sample points."""


class SizeMismatchError(ValueError):
    """Sample size differs from the size of the null table."""


def _testable(transform) -> ReferenceTransform:
    t = ReferenceTransform.of(transform)
    if not t.anchored_at_zero:
        raise ValueError("the GCM test needs H^{-1}(0) = 0; the logit reference is not supported")
    return t


def _separate_ties(x: np.ndarray) -> np.ndarray:
    """Nudge repeated values upward by single ulps so that abscissae are distinct."""
    x = x.copy()
    nudged = False
    for k in range(1, x.size):
        if x[k] <= x[k - 1]:
            x[k] = np.nextafter(x[k - 1], np.inf)
            nudged = True
    if nudged:
        warnings.warn("tied sample values were separated by one-ulp perturbations", RuntimeWarning, stacklevel=3)
    return x


@dataclass(frozen=True)
class TransformedEmpirical:
    """Sorted sample with the node heights of ``H^{-1}(F_n)``.

    ``h`` holds ``h_k = H^{-1}(k/n)`` for ``k = 1..n-1``; ``nodes`` holds the
    height attached to each ``x_j`` under the chosen convention.
    """

    x: np.ndarray
    h: np.ndarray
    nodes: np.ndarray
    transform: ReferenceTransform
    convention: NodeConvention

    @classmethod
    def from_sample(cls, sample, transform, convention=NodeConvention.ANCHORED) -> "TransformedEmpirical":
        t = _testable(transform)
        conv = NodeConvention.of(convention)
        x = np.sort(np.asarray(sample, dtype=float).ravel())
        if x.size < 3 or np.unique(x).size < 3:
            raise DegenerateSampleError("the GCM test needs at least 3 distinct sample values")
        if not np.all(np.isfinite(x)):
            raise ValueError("sample contains non-finite values")
        x = _separate_ties(x)
        n = x.size
        h = np.asarray(t.quantile(np.arange(1, n) / n), dtype=float)
        if conv is NodeConvention.ANCHORED:
            nodes = np.empty(n)
            nodes[0] = float(t.quantile(0.0))
            nodes[1:n - 1] = h[1:]
            nodes[n - 1] = h[-1]
        else:
            nodes = np.concatenate(([h[0]], h))
        return cls(x, h, nodes, t, conv)

    @property
    def n(self) -> int:
        return int(self.x.size)

    @property
    def weights(self) -> np.ndarray:
        """``w_j`` for ``j = 2..n-1`` (1-based)."""
        inner = self.nodes[1:-1]
        if self.transform.kind is TransformKind.UNIFORM:
            return np.ones_like(inner)
        with np.errstate(divide="ignore"):
            return np.where(inner > 0, 1.0 / inner, 0.0)


@dataclass(frozen=True)
class GcmResult:
    values: np.ndarray
    vertices: tuple[int, ...]

    @property
    def contact(self) -> tuple[int, ...]:
        return self.vertices


def lower_hull(x: np.ndarray, y: np.ndarray) -> list[int]:
    """Indices of the lower convex hull vertices of points sorted by ``x``."""
    hull: list[int] = []
    for k in range(len(x)):
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            cross = (x[b] - x[a]) * (y[k] - y[a]) - (y[b] - y[a]) * (x[k] - x[a])
            if cross <= 0:
                hull.pop()
            else:
                break
        hull.append(k)
    return hull


def gcm(te: TransformedEmpirical) -> GcmResult:
    """Greatest convex minorant of the nodes, evaluated at every ``x_j``."""
    x, y = te.x, te.nodes
    idx = lower_hull(x, y)
    values = np.interp(x, x[idx], y[idx])
    values[idx] = y[idx]
    return GcmResult(values, tuple(idx))


def ks_statistic(te: TransformedEmpirical, g: GcmResult | None = None) -> float:
    """Weighted KS distance between the nodes and their GCM over ``j = 2..n-1``."""
    g = gcm(te) if g is None else g
    gaps = te.nodes[1:-1] - g.values[1:-1]
    return float(max(0.0, np.max(te.weights * gaps)))


def statistic(sample, transform, convention=NodeConvention.ANCHORED) -> float:
    return ks_statistic(TransformedEmpirical.from_sample(sample, transform, convention))


# null distribution ----------------------------------------------------------

def _null_chunk(args) -> list[float]:
    kind, n, convention, seeds = args
    t = ReferenceTransform(TransformKind(kind))
    conv = NodeConvention(convention)
    out = []
    for ss in seeds:
        rng = np.random.default_rng(ss)
        out.append(ks_statistic(TransformedEmpirical.from_sample(t.sample(n, rng), t, conv)))
    return out


@dataclass(frozen=True)
class NullDistribution:
    """Sorted simulated statistics from samples of ``H`` itself."""

    kind: TransformKind
    n: int
    runs: int
    seed: int
    convention: NodeConvention
    values: np.ndarray = field(repr=False)

    def quantile(self, p):
        return np.quantile(self.values, p)

    def p_value(self, stat: float) -> float:
        """``(#{null >= stat} + 1) / (runs + 1)``."""
        exceed = self.values.size - np.searchsorted(self.values, stat, side="left")
        return float((exceed + 1) / (self.values.size + 1))

    def critical_value(self, alpha: float) -> float:
        """Empirical ``(1 - alpha)`` quantile; reject when the statistic reaches it."""
        if not 0 < alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        k = min(int(math.floor(self.runs * (1.0 - alpha))), self.runs - 1)
        return float(self.values[k])

    @property
    def low_precision(self) -> bool:
        return self.runs < MIN_RUNS


def _cache_path(cache_dir, kind, n, runs, seed, convention) -> Path:
    return Path(cache_dir) / f"null_{kind.value}_{convention.value}_n{n}_r{runs}_s{seed}.csv"


def _read_cache(path: Path, key: tuple) -> np.ndarray | None:
    try:
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
    except OSError:
        return None
    if not rows:
        return None
    stored = (rows[0]["kind"], int(rows[0]["n"]), int(rows[0]["runs"]), int(rows[0]["seed"]), rows[0]["nodes"])
    if stored != key or len(rows) != key[2]:
        logger.warning("ignoring stale null cache %s", path)
        return None
    return np.array([float(r["statistic"]) for r in rows])


def _write_cache(path: Path, key: tuple, values: np.ndarray) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    with open(tmp, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["kind", "n", "runs", "seed", "nodes", "statistic"])
        for v in values:
            w.writerow([*key, repr(float(v))])
    os.replace(tmp, path)


def null_distribution(transform, n: int, runs: int = 3000, seed: int = 0,
                      convention=NodeConvention.ANCHORED, cache_dir=None,
                      workers: int = 1) -> NullDistribution:
    """Simulate the least-favourable null distribution of the statistic.

    Run ``r`` uses its own generator seeded from ``SeedSequence(seed)``'s
    ``r``-th child, so the output is identical for any ``workers`` count.
    Fewer than 500 runs is allowed but logged as low precision.
    """
    t = _testable(transform)
    conv = NodeConvention.of(convention)
    if n < 3:
        raise DegenerateSampleError("null tables need n >= 3")
    if runs < 1:
        raise ValueError("runs must be >= 1")
    if runs < MIN_RUNS:
        logger.warning("null distribution with %d runs (< %d) is low precision", runs, MIN_RUNS)
    key = (t.kind.value, int(n), int(runs), int(seed), conv.value)
    path = _cache_path(cache_dir, t.kind, n, runs, seed, conv) if cache_dir else None
    if path is not None:
        cached = _read_cache(path, key)
        if cached is not None:
            return NullDistribution(t.kind, n, runs, seed, conv, np.sort(cached))

    seeds = np.random.SeedSequence(seed).spawn(runs)
    if workers > 1 and runs > 1:
        size = math.ceil(runs / workers)
        chunks = [(t.kind.value, n, conv.value, seeds[k:k + size]) for k in range(0, runs, size)]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            values = [v for part in ex.map(_null_chunk, chunks) for v in part]
    else:
        values = _null_chunk((t.kind.value, n, conv.value, seeds))
    values = np.sort(np.asarray(values, dtype=float))
    if path is not None:
        _write_cache(path, key, values)
    return NullDistribution(t.kind, n, runs, seed, conv, values)


# the test --------------------------------------------------------------------

@dataclass(frozen=True)
class ConvexityTestResult:
    statistic: float
    p_value: float
    critical_value: float
    alpha: float
    reject: bool
    runs: int
    seed: int
    n: int
    transform: str
    convention: str
    nodes: tuple[tuple[float, float, float], ...] = field(repr=False, default=())

    @property
    def advisory(self) -> str | None:
        if self.statistic > ADVISORY_THRESHOLD:
            return f"statistic above {ADVISORY_THRESHOLD}: informal evidence against convexity"
        return None

    def as_dict(self, include_nodes: bool = True) -> dict:
        out = {
            "statistic": self.statistic,
            "p_value": self.p_value,
            "critical_value": self.critical_value,
            "alpha": self.alpha,
            "decision": "reject" if self.reject else "accept",
            "runs": self.runs,
            "seed": self.seed,
            "n": self.n,
            "transform": self.transform,
            "nodes": self.convention,
            "advisory": self.advisory,
        }
        if include_nodes:
            out["gcm"] = [{"x": x, "step": s, "gcm": g} for x, s, g in self.nodes]
        return out


def convexity_test(sample, transform, null: NullDistribution, alpha: float = 0.1) -> ConvexityTestResult:
    """Test ``H0: H^{-1}(F)`` convex against the simulated null table."""
    t = _testable(transform)
    if t.kind is not null.kind:
        raise ValueError(f"null table is for {null.kind.value}, not {t.kind.value}")
    te = TransformedEmpirical.from_sample(sample, t, null.convention)
    if te.n != null.n:
        raise SizeMismatchError(f"sample size {te.n} does not match null table size {null.n}")
    g = gcm(te)
    stat = ks_statistic(te, g)
    crit = null.critical_value(alpha)
    return ConvexityTestResult(
        statistic=stat,
        p_value=null.p_value(stat),
        critical_value=crit,
        alpha=alpha,
        reject=stat >= crit,
        runs=null.runs,
        seed=null.seed,
        n=te.n,
        transform=t.kind.value,
        convention=null.convention.value,
        nodes=tuple(zip(te.x.tolist(), te.nodes.tolist(), g.values.tolist())),
    )


# simulation studies -----------------------------------------------------------

TABLE2_SIZES = (10, 15, 20, 25, 30, 40, 50, 75, 100)
TABLE2_LEVELS = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95)
TABLE3_SIZES = (25, 50, 75, 100)
TABLE3_FAMILIES = ("gamma(a=2,b=1)", "gamma(a=1,b=1)", "gamma(a=0.5,b=1)",
                   "pareto(a=2,b=1)", "pareto(a=1,b=1)", "pareto(a=0.5,b=1)")


def null_quantile_table(transform="odds", sizes: Sequence[int] = TABLE2_SIZES,
                        levels: Sequence[float] = TABLE2_LEVELS, runs: int = 3000, seed: int = 0,
                        convention=NodeConvention.ANCHORED, cache_dir=None, workers: int = 1) -> dict:
    """Quantiles of the null statistic: ``{n: [q(p) for p in levels]}``."""
    out = {}
    for n in sizes:
        null = null_distribution(transform, n, runs, seed, convention, cache_dir, workers)
        out[n] = [float(v) for v in null.quantile(list(levels))]
    return out


@dataclass(frozen=True)
class PowerCell:
    family: str
    n: int
    mean_p: float
    sd_p: float
    acceptance: float
    replicates: int

    def as_text(self) -> str:
        return f"{self.mean_p:.2f};{self.sd_p:.2f};{100 * self.acceptance:.0f}%"


def power_study(families: Sequence = TABLE3_FAMILIES, sizes: Sequence[int] = TABLE3_SIZES,
                replicates: int = 100, alpha: float = 0.1, runs: int = 3000, seed: int = 0,
                transform="odds", convention=NodeConvention.ANCHORED, cache_dir=None,
                workers: int = 1) -> list[PowerCell]:
    """Mean and (population) sd of p-values and acceptance rates per family and size.

    Replicate ``r`` of family ``f`` at size ``n`` is drawn from
    ``SeedSequence([seed, 1, f, n, r])``; the null table for ``n`` uses
    ``seed`` directly.
    """
    from .catalog import parse_distribution

    dists = [f if isinstance(f, ParametricDistribution) else parse_distribution(f) for f in families]
    cells = []
    for n in sizes:
        null = null_distribution(transform, n, runs, seed, convention, cache_dir, workers)
        for fi, d in enumerate(dists):
            pvals, accept = [], []
            for r in range(replicates):
                rng = np.random.default_rng(np.random.SeedSequence([seed, 1, fi, n, r]))
                res = convexity_test(d.sample(n, rng), transform, null, alpha)
                pvals.append(res.p_value)
                accept.append(not res.reject)
            pv = np.asarray(pvals)
            cells.append(PowerCell(str(d), n, float(pv.mean()), float(pv.std()), float(np.mean(accept)), replicates))
    return cells


def write_table2_csv(table: dict, levels: Sequence[float], runs: int, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    sizes = list(table)
    w.writerow(["runs", *[runs] * len(sizes)])
    w.writerow(["p", *[f"n={n}" for n in sizes]])
    for k, p in enumerate(levels):
        w.writerow([f"p={p:g}", *[f"{table[n][k]:.3f}" for n in sizes]])


def write_table3_csv(cells: Sequence[PowerCell], fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    sizes = sorted({c.n for c in cells})
    families = list(dict.fromkeys(c.family for c in cells))
    w.writerow(["family", *[f"n={n}" for n in sizes]])
    lookup = {(c.family, c.n): c for c in cells}
    for f in families:
        w.writerow([f, *[lookup[(f, n)].as_text() for n in sizes]])

