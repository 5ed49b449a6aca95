"""Numerical machinery for stochastic orders between (order statistics of) distributions.

* :func:`sign_changes` counts sign changes of a function on a probe grid,
  ignoring zeros, and locates each crossing by root bracketing.
* :func:`ssd_numeric` checks second-order dominance through the running
  integral of ``F_X - F_Y``.
* :func:`order_stat_cdf`, :func:`order_stat_mean` and :func:`maxima_mean`
  describe order statistics of a parametric parent.
* :func:`dominance_degree` finds the largest ``h`` such that the ``h``-fold
  maxima of X dominate those of Y in the second-order sense.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, optimize
from scipy import special as sc

from .catalog import Family, ParametricDistribution
from .reference import OrderStatSpec

log = logging.getLogger(__name__)

SSD_TOL = 1e-7
DEFAULT_GRID = 4096
_TAIL_POINTS = 48


class DominanceError(ValueError):
    """A dominance computation could not be carried out."""


class PreconditionError(DominanceError):
    """The CDF difference is not single-crossing from below."""


class NotDominatedError(DominanceError):
    """X does not even dominate Y in the second-order sense."""


class DivergentMeanError(DominanceError):
    """The requested expectation is infinite or undefined."""


class Sign(enum.Enum):
    MINUS = "minus"
    PLUS = "plus"
    NONE = "none"


@dataclass(frozen=True)
class CrossingReport:
    count: int
    first_sign: Sign
    crossing_locations: tuple[float, ...] = ()
    unreliable: bool = False
    method: str = "grid"

    @property
    def single_crossing_from_below(self) -> bool:
        """At most one sign change and, if any, the sequence starts with minus."""
        return self.count <= 1 and self.first_sign is not Sign.PLUS


def sign_changes(f: Callable, interval: tuple[float, float] | None = None, grid_size: int = DEFAULT_GRID,
                 probe: Callable | None = None, zero_tol: float = 0.0,
                 xtol_rel: float = 1e-12) -> CrossingReport:
    """Count sign changes of ``f`` over a probe grid.

    Parameters
    ----------
    f : callable
        Vectorised real function.
    interval : (lo, hi), optional
        Finite interval for a uniform grid.  Required when ``probe`` is not
        given; otherwise it clips the probe grid.
    grid_size : int
        Number of probe points (>= 64).
    probe : callable, optional
        Quantile function of a probing distribution; the grid is its image
        of a uniform grid on (0, 1) with log-spaced tails added.
    zero_tol : float
        Values with ``|f| <= zero_tol`` count as zero and are skipped.
    xtol_rel : float
        Crossing locations are refined to this relative precision.
    """
    if grid_size < 64:
        raise ValueError("grid_size must be >= 64")
    if probe is None:
        if interval is None:
            raise ValueError("need an interval or a probe quantile function")
        lo, hi = interval
        x = np.linspace(lo, hi, grid_size)
    else:
        x = np.asarray(probe(probe_levels(grid_size)), dtype=float)
        x = x[np.isfinite(x)]
        if interval is not None:
            x = x[(x >= interval[0]) & (x <= interval[1])]
        x = np.unique(x)
    if x.size < 2:
        return CrossingReport(0, Sign.NONE, (), unreliable=True)
    y = np.asarray(f(x), dtype=float)
    keep = np.isfinite(y) & (np.abs(y) > zero_tol)
    xs, ys = x[keep], y[keep]
    if xs.size == 0:
        return CrossingReport(0, Sign.NONE)
    s = np.sign(ys)
    idx = np.nonzero(s[1:] != s[:-1])[0]
    locations = []
    unreliable = False
    for k in idx:
        a, b = float(xs[k]), float(xs[k + 1])
        try:
            root = optimize.brentq(lambda t: float(f(np.asarray(t))), a, b,
                                   xtol=max(xtol_rel * max(abs(a), abs(b)), 1e-300),
                                   rtol=max(xtol_rel, 4 * np.finfo(float).eps))
        except (ValueError, RuntimeError):
            unreliable = True
            root = 0.5 * (a + b)
        locations.append(root)
    first = Sign.MINUS if s[0] < 0 else Sign.PLUS
    return CrossingReport(int(idx.size), first, tuple(locations), unreliable)


def probe_levels(grid_size: int = DEFAULT_GRID) -> np.ndarray:
    """Probability levels: a uniform grid plus log-spaced points in both tails."""
    core = (np.arange(grid_size) + 0.5) / grid_size
    lower = np.logspace(-300, math.log10(core[0]), _TAIL_POINTS, endpoint=False)
    upper = 1.0 - np.logspace(-15, math.log10(1.0 - core[-1]), _TAIL_POINTS, endpoint=False)
    return np.unique(np.concatenate([lower, core, upper]))


def mixture_quantile(quantiles: Sequence[Callable], cdfs: Sequence[Callable], iterations: int = 80) -> Callable:
    """Quantile function of the equal-weight mixture of the given distributions.

    Solved by vectorised bisection between the smallest and largest
    component quantiles.
    """
    def q(p):
        p = np.asarray(p, dtype=float)
        qs = np.array([np.asarray(qf(p), dtype=float) for qf in quantiles])
        lo = np.min(qs, axis=0)
        hi = np.max(qs, axis=0)
        for _ in range(iterations):
            mid = 0.5 * (lo + hi)
            val = np.mean([np.asarray(cf(mid), dtype=float) for cf in cdfs], axis=0)
            below = val < p
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
            if np.all(hi - lo <= 1e-15 * np.maximum(np.abs(hi), 1e-300)):
                break
        return 0.5 * (lo + hi)

    return q


def cdf_crossings(dX: ParametricDistribution, dY: ParametricDistribution,
                  grid_size: int = DEFAULT_GRID) -> CrossingReport:
    """Sign changes of ``F_X - F_Y``.

    Two log-logistic parents are handled in closed form: on the log scale
    their log-odds are linear, so there is at most one crossing.  Other
    pairs are scanned on the quantile grid of the mixture of X and Y.
    """
    if dX.family is Family.LOGLOGISTIC and dY.family is Family.LOGLOGISTIC:
        return _loglogistic_crossings(dX, dY)
    probe = mixture_quantile([dX.quantile, dY.quantile], [dX.cdf, dY.cdf])
    return sign_changes(lambda x: dX.cdf(x) - dY.cdf(x), grid_size=grid_size, probe=probe, zero_tol=1e-14)


def _loglogistic_crossings(dX, dY) -> CrossingReport:
    ax, bx = dX.p["a"], dX.p["b"]
    ay, by = dY.p["a"], dY.p["b"]
    # log-odds are a*(t - log b) in t = log x; F_X - F_Y has the sign of their difference
    slope = ax - ay
    offset = -ax * math.log(bx) + ay * math.log(by)
    if slope == 0.0:
        if offset == 0.0:
            return CrossingReport(0, Sign.NONE, method="closed-form")
        return CrossingReport(0, Sign.PLUS if offset > 0 else Sign.MINUS, method="closed-form")
    t_star = -offset / slope
    first = Sign.MINUS if slope > 0 else Sign.PLUS
    location = math.exp(t_star) if t_star < 709.0 else math.inf
    return CrossingReport(1, first, (location,), method="closed-form")


# second-order dominance ----------------------------------------------------

class Verdict(enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class SsdResult:
    verdict: Verdict
    worst_x: float
    worst_value: float
    threshold: float
    error_estimate: float

    @property
    def holds(self) -> bool:
        return self.verdict is Verdict.HOLDS


_GL_HI = np.polynomial.legendre.leggauss(10)
_GL_LO = np.polynomial.legendre.leggauss(5)


def _panel_integrals(fn, a, b, rule):
    nodes, weights = rule
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    pts = mid[:, None] + half[:, None] * nodes[None, :]
    vals = np.asarray(fn(pts.ravel()), dtype=float).reshape(pts.shape)
    return half * (vals @ weights)


def ssd_numeric(cdf_x: Callable, cdf_y: Callable, grid, mean_x: float | None = None,
                mean_y: float | None = None, tol: float = SSD_TOL, max_refine: int = 12) -> SsdResult:
    """Decide ``X >=_2 Y`` from the running integral of ``F_X - F_Y``.

    The integral is accumulated panel by panel over ``grid`` (sorted probe
    points; the region left of ``grid[0]`` is assumed to carry no mass) with
    10-point Gauss-Legendre, and a 5-point rule gives the error estimate;
    panels carrying most of the estimate are bisected (up to ``max_refine``
    rounds) until the total is a tenth of the tolerance.
    When both means are supplied the limit ``E[Y] - E[X]`` of the integral
    at +inf is checked as well.

    The verdict is ``holds`` when the supremum plus error is at most
    ``tol * max(1, |E X|, |E Y|)``, ``fails`` when the supremum minus error
    exceeds it, and ``inconclusive`` otherwise.
    """
    grid = np.unique(np.asarray(grid, dtype=float))
    grid = grid[np.isfinite(grid)]
    if grid.size < 2:
        raise DominanceError("need at least two finite grid points")
    a, b = grid[:-1], grid[1:]

    def diff(t):
        return np.asarray(cdf_x(t), dtype=float) - np.asarray(cdf_y(t), dtype=float)

    scale = max(1.0, abs(mean_x), abs(mean_y)) if mean_x is not None and mean_y is not None else 1.0
    budget = 0.1 * tol * scale
    for _ in range(max_refine + 1):
        hi = _panel_integrals(diff, a, b, _GL_HI)
        lo = _panel_integrals(diff, a, b, _GL_LO)
        if not (np.all(np.isfinite(hi)) and np.all(np.isfinite(lo))):
            raise DominanceError("integration failure: non-finite CDF difference")
        panel_err = np.abs(hi - lo)
        if panel_err.sum() <= budget or a.size > 200_000:
            break
        # bisect the panels that carry most of the error estimate
        bad = panel_err > budget / a.size
        mid = 0.5 * (a[bad] + b[bad])
        a = np.sort(np.concatenate([a, mid]))
        b = np.sort(np.concatenate([b, mid]))
    running = np.concatenate([[0.0], np.cumsum(hi)])
    err = float(panel_err.sum()) + 64 * np.finfo(float).eps * float(np.sum(np.abs(hi)))
    points = [a[0], *b]
    values = list(running)
    if mean_x is not None and mean_y is not None:
        points.append(math.inf)
        values.append(mean_y - mean_x)
    values = np.asarray(values)
    k = int(np.argmax(values))
    sup = float(values[k])
    threshold = tol * scale
    if sup + err <= threshold:
        verdict = Verdict.HOLDS
    elif sup - err > threshold:
        verdict = Verdict.FAILS
    else:
        verdict = Verdict.INCONCLUSIVE
    return SsdResult(verdict, float(points[k]), sup, threshold, err)


# order statistics ----------------------------------------------------------

def order_stat_cdf(d: ParametricDistribution, s: OrderStatSpec) -> Callable:
    """CDF of ``X_{i:n}``: the beta(i, n-i+1) CDF composed with ``F``."""
    a, b = s.beta_params

    def cdf(x):
        return sc.betainc(a, b, np.clip(np.asarray(d.cdf(x), dtype=float), 0.0, 1.0))

    return cdf


def order_stat_quantile(d: ParametricDistribution, s: OrderStatSpec) -> Callable:
    a, b = s.beta_params

    def quantile(p):
        return d.quantile(sc.betaincinv(a, b, np.asarray(p, dtype=float)))

    return quantile


def order_stat_mean_exists(d: ParametricDistribution, s: OrderStatSpec) -> bool:
    i, n = s.i, s.n
    return d.upper_tail_index * (n - i + 1) > 1 and d.lower_tail_index * i > 1


def order_stat_mean(d: ParametricDistribution, s: OrderStatSpec, rel_tol: float = 1e-10) -> float:
    """``E X_{i:n} = int_0^1 Q(p) beta_pdf(p; i, n-i+1) dp`` by adaptive quadrature.

    Below the beta median the integral runs in ``p``; above it, in the
    survival probability ``q = 1 - p`` with the inverse survival function,
    so heavy upper tails keep full relative precision.  Both halves are
    split at beta quantiles so the adaptive rule sees where the weight is.
    """
    if not order_stat_mean_exists(d, s):
        raise DivergentMeanError(f"E {s} is infinite for {d}")
    a, b = s.beta_params
    log_norm = sc.betaln(a, b)

    def lower(p):
        if p <= 0.0:
            return 0.0
        w = math.exp((a - 1) * math.log(p) + (b - 1) * math.log1p(-p) - log_norm)
        return float(d.quantile(p)) * w if w else 0.0

    def upper(q):
        if q <= 0.0:
            return 0.0
        w = math.exp((a - 1) * math.log1p(-q) + (b - 1) * math.log(q) - log_norm)
        return float(d.upper_quantile(q)) * w if w else 0.0

    levels = np.array([1e-14, 1e-10, 1e-6, 1e-3, 0.02, 0.1, 0.25])
    median = float(sc.betaincinv(a, b, 0.5))
    total = 0.0
    for fn, cuts, top in ((lower, sc.betaincinv(a, b, levels), median),
                          (upper, sc.betaincinv(b, a, levels), 1.0 - median)):
        edges = [0.0] + sorted({float(c) for c in cuts if 0.0 < c < top}) + [top]
        for lo, hi in zip(edges[:-1], edges[1:]):
            val, _ = integrate.quad(fn, lo, hi, epsabs=0.0, epsrel=rel_tol, limit=400)
            total += val
    return total


def maxima_mean(d: ParametricDistribution, k: int) -> float:
    """``E max(X_1, ..., X_k)``.

    Closed form for Dagum and log-logistic parents (the k-fold maximum of a
    Dagum variable is Dagum with ``p`` replaced by ``k p``); quadrature
    otherwise.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if d.family in (Family.DAGUM, Family.LOGLOGISTIC):
        return _dagum_maxima_mean(d, k)
    return order_stat_mean(d, OrderStatSpec(k, k))


def _dagum_maxima_mean(d, k):
    a, b = d.p["a"], d.p["b"]
    p = d.p.get("p", 1.0)
    if a <= 1:
        raise DivergentMeanError(f"E max of {k} draws is infinite for {d}")
    kp = k * p
    return b * math.exp(math.lgamma(kp + 1.0 / a) + math.lgamma(1.0 - 1.0 / a) - math.lgamma(kp))


# fractional degree ---------------------------------------------------------

@dataclass(frozen=True)
class DominanceDegree:
    """Result of the fractional-degree search.

    ``k`` is the largest h such that the h-fold maxima of X dominate those
    of Y in the SSD sense; ``fsd`` marks first-order dominance (every h).
    ``exhausted`` means every h up to ``certified_up_to`` passed, so the
    true degree may be larger.
    """

    k: int
    certified_up_to: int
    fsd: bool = False
    exhausted: bool = False
    crossing: CrossingReport | None = None
    comparisons: tuple[tuple[int, float, float], ...] = field(default=(), repr=False)
    non_monotone: bool = False

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("degree must be >= 1")

    def allows(self, i: int) -> bool:
        """True when the degree covers rank ``i`` (``i <= k`` or FSD)."""
        return self.fsd or i <= self.k

    @classmethod
    def first_order(cls, certified_up_to: int = 1) -> "DominanceDegree":
        return cls(k=max(1, certified_up_to), certified_up_to=certified_up_to, fsd=True)


def dominance_degree(dX: ParametricDistribution, dY: ParametricDistribution, k_max: int = 50,
                     crossing: CrossingReport | None = None) -> DominanceDegree:
    """Largest ``h <= k_max`` with ``E X_{h:h} >= E Y_{h:h}``.

    Requires ``F_X - F_Y`` to change sign at most once, starting from minus;
    then for every h the comparison of maxima means decides SSD of the
    maxima.  Every h up to ``k_max`` is evaluated and the degree is the end
    of the initial run of successes.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    if crossing is None:
        crossing = cdf_crossings(dX, dY)
    if crossing.count == 0 and crossing.first_sign is not Sign.PLUS:
        return DominanceDegree(k=k_max, certified_up_to=k_max, fsd=True, crossing=crossing)
    if not crossing.single_crossing_from_below:
        raise PreconditionError(
            f"F_X - F_Y has {crossing.count} sign change(s) starting with {crossing.first_sign.value}")
    comparisons = []
    for h in range(1, k_max + 1):
        comparisons.append((h, maxima_mean(dX, h), maxima_mean(dY, h)))
    ok = [ex >= ey for _, ex, ey in comparisons]
    if not ok[0]:
        raise NotDominatedError(f"E X = {comparisons[0][1]:.6g} < E Y = {comparisons[0][2]:.6g}")
    k = k_max if all(ok) else ok.index(False)
    non_monotone = any(ok[k:])
    if non_monotone:
        log.warning("maxima-mean comparison flips more than once up to k_max=%d", k_max)
    return DominanceDegree(k=k, certified_up_to=k_max, exhausted=all(ok), crossing=crossing,
                           comparisons=tuple(comparisons), non_monotone=non_monotone)


# convenience ---------------------------------------------------------------

def ssd_order_statistics(dX: ParametricDistribution, sX: OrderStatSpec, dY: ParametricDistribution,
                         sY: OrderStatSpec, grid_size: int = DEFAULT_GRID, tol: float = SSD_TOL) -> SsdResult:
    """Numeric SSD check of ``X_{i:n}`` against ``Y_{j:m}``."""
    qx, qy = order_stat_quantile(dX, sX), order_stat_quantile(dY, sY)
    fx, fy = order_stat_cdf(dX, sX), order_stat_cdf(dY, sY)
    grid = mixture_quantile([qx, qy], [fx, fy])(probe_levels(grid_size))
    lower = min(dX.support[0], dY.support[0])
    if math.isfinite(lower):
        grid = np.concatenate([[lower], grid])
    mx = order_stat_mean(dX, sX) if order_stat_mean_exists(dX, sX) else None
    my = order_stat_mean(dY, sY) if order_stat_mean_exists(dY, sY) else None
    if mx is None or my is None:
        mx = my = None
    return ssd_numeric(fx, fy, grid, mx, my, tol=tol)
