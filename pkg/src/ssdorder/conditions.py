"""Sufficient conditions for ``X_{i:n} >=_2 X_{j:m}`` (and the two-sample variant).

For a parent in one of the convexity classes, dominance of the order
statistics follows from ``i >= j`` plus one inequality between the means of
``H^{-1}(B)`` for the two beta variables.  The inequalities are compared in
exact rational arithmetic whenever the sizes allow, so ties such as
``i/n == j/m`` are decided correctly.

A verdict that is not certified means the condition is silent, never that
dominance fails.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator

import numpy as np

from .catalog import ParametricDistribution
from .dominance import (DominanceDegree, DominanceError, NotDominatedError, cdf_crossings,
                        dominance_degree)
from .reference import ConvexityClass, OrderStatSpec, expected_transformed_beta

EXACT_LIMIT = 2000

_harmonic_cache: list[Fraction] = [Fraction(0)]


def _harmonic(k: int) -> Fraction:
    """Exact harmonic number H_k (H_0 = 0)."""
    while len(_harmonic_cache) <= k:
        _harmonic_cache.append(_harmonic_cache[-1] + Fraction(1, len(_harmonic_cache)))
    return _harmonic_cache[k]


def _exact_value(cls: ConvexityClass, s: OrderStatSpec):
    i, n = s.i, s.n
    if cls is ConvexityClass.C:
        return Fraction(i, n + 1)
    if cls is ConvexityClass.CO:
        return math.inf if i == n else Fraction(i, n)
    if cls is ConvexityClass.IFR:
        return _harmonic(n) - _harmonic(n - i)
    # psi(i) - psi(n - i + 1) = H_{i-1} - H_{n-i}
    return _harmonic(i - 1) - _harmonic(n - i)


def _compare(cls: ConvexityClass, si: OrderStatSpec, sj: OrderStatSpec, lhs: float, rhs: float) -> bool:
    if cls is ConvexityClass.CO:
        return si.i * sj.n >= sj.i * si.n
    if cls is ConvexityClass.C:
        return si.i * (sj.n + 1) >= sj.i * (si.n + 1)
    if max(si.n, sj.n) <= EXACT_LIMIT:
        return _exact_value(cls, si) >= _exact_value(cls, sj)
    return lhs >= rhs


@dataclass(frozen=True)
class DominanceVerdict:
    certified: bool
    condition_used: ConvexityClass | None
    lhs: float
    rhs: float
    rank_ok: bool
    degree_ok: bool | None = None
    degree: int | None = None
    note: str = ""

    def __post_init__(self):
        if self.certified:
            if not self.rank_ok:
                raise ValueError("a certified verdict needs i >= j")
            if not (self.lhs >= self.rhs or math.isclose(self.lhs, self.rhs, rel_tol=1e-12)):
                raise ValueError("a certified verdict needs lhs >= rhs")

    def as_dict(self) -> dict:
        return {
            "certified": self.certified,
            "condition": self.condition_used.value if self.condition_used else "none",
            "lhs": self.lhs,
            "rhs": self.rhs,
            "rank_ok": self.rank_ok,
            "degree_ok": self.degree_ok,
            "degree": self.degree,
        }


def _side_value(cls: ConvexityClass, s: OrderStatSpec) -> float:
    if cls is ConvexityClass.CO:
        return s.i / s.n
    return expected_transformed_beta(cls.transform, s)


def corollary1(cls: ConvexityClass, si: OrderStatSpec, sj: OrderStatSpec) -> DominanceVerdict:
    """One-sample condition: parent in ``cls`` and ``i >= j`` plus the class inequality.

    ``lhs``/``rhs`` are i/(n+1) for C, psi(i) - psi(n-i+1) for CL, the
    harmonic tail sum_{k=n-i+1}^{n} 1/k for IFR and i/n for CO (and the same
    for ``sj``).
    """
    cls = cls if isinstance(cls, ConvexityClass) else ConvexityClass.parse(str(cls))
    lhs = _side_value(cls, si)
    rhs = _side_value(cls, sj)
    rank_ok = si.i >= sj.i
    holds = _compare(cls, si, sj, lhs, rhs)
    return DominanceVerdict(certified=rank_ok and holds, condition_used=cls, lhs=lhs, rhs=rhs, rank_ok=rank_ok)


def corollary2(cls_y: ConvexityClass, degree: DominanceDegree, si: OrderStatSpec,
               sj: OrderStatSpec) -> DominanceVerdict:
    """Two-sample condition: ``X >=_{1+1/k} Y`` with ``k >= i`` and ``F_Y`` in ``cls_y``."""
    base = corollary1(cls_y, si, sj)
    degree_ok = degree.allows(si.i)
    note = "first-order dominance" if degree.fsd else f"degree k={degree.k}"
    return DominanceVerdict(
        certified=base.certified and degree_ok,
        condition_used=base.condition_used,
        lhs=base.lhs,
        rhs=base.rhs,
        rank_ok=base.rank_ok,
        degree_ok=degree_ok,
        degree=None if degree.fsd else degree.k,
        note=note,
    )


def scan_ranks(cls: ConvexityClass, n: int, sj: OrderStatSpec) -> Iterator[tuple[int, DominanceVerdict]]:
    """Corollary-1 verdicts for ``X_{i:n}`` against ``sj``, i = j..n."""
    for i in range(max(1, sj.i), n + 1):
        yield i, corollary1(cls, OrderStatSpec(i, n), sj)


def min_rank(cls: ConvexityClass, n: int, sj: OrderStatSpec) -> int | None:
    """Smallest ``i`` for which the class condition certifies ``X_{i:n} >=_2 sj``.

    Each class quantity increases with ``i``, so the certified set is an
    upper run of ranks; the scan checks that as it goes.
    """
    first = None
    for i, verdict in scan_ranks(cls, n, sj):
        if verdict.certified and first is None:
            first = i
        elif first is not None and not verdict.certified:
            raise AssertionError(f"certification is not monotone in i (lost at i={i})")
    return first


# parameter search -----------------------------------------------------------

class SearchError(DominanceError):
    """No parameter value in the bounds is certified."""


@dataclass(frozen=True)
class ParamRange:
    lower: float
    upper: float
    resolution: float
    evaluations: tuple[tuple[float, bool, str], ...] = field(default=(), repr=False)
    disjoint: bool = False


def param_range_search(template: Callable[[float], ParametricDistribution], dY: ParametricDistribution,
                       si: OrderStatSpec, sj: OrderStatSpec, class_of_y: ConvexityClass,
                       bounds: tuple[float, float], resolution: float = 1e-3,
                       coarse: int = 41) -> ParamRange:
    """Range of a free parameter of X for which ``X_{i:n} >=_2 Y_{j:m}`` is certified.

    A value ``t`` is certified when ``template(t)`` is single-crossing from
    below against ``dY``, its dominance degree reaches ``i``, and the rank
    condition of ``class_of_y`` holds.  A coarse grid locates the certified
    run, whose ends are then bisected to ``resolution``.  The returned
    endpoints lie on the certified side.
    """
    lo, hi = map(float, bounds)
    if not hi > lo:
        raise ValueError("bounds must satisfy lower < upper")
    base = corollary1(class_of_y, si, sj)
    if not base.certified:
        raise SearchError(f"class {class_of_y.value} condition fails for {si} vs {sj}; no parameter can help")
    log_: list[tuple[float, bool, str]] = []

    def ok(t: float) -> bool:
        try:
            dX = template(t)
        except ValueError as exc:
            log_.append((t, False, f"invalid: {exc}"))
            return False
        crossing = cdf_crossings(dX, dY)
        if not crossing.single_crossing_from_below:
            log_.append((t, False, f"precondition: {crossing.count} crossing(s), first {crossing.first_sign.value}"))
            return False
        try:
            deg = dominance_degree(dX, dY, k_max=si.i, crossing=crossing)
        except NotDominatedError as exc:
            log_.append((t, False, f"not dominated: {exc}"))
            return False
        good = deg.allows(si.i)
        log_.append((t, good, "fsd" if deg.fsd else f"degree {deg.k}"))
        return good

    grid = np.linspace(lo, hi, coarse)
    flags = [ok(float(t)) for t in grid]
    runs = []
    start = None
    for k, f in enumerate(flags):
        if f and start is None:
            start = k
        if not f and start is not None:
            runs.append((start, k - 1))
            start = None
    if start is not None:
        runs.append((start, coarse - 1))
    if not runs:
        raise SearchError("no certified parameter value on the search grid")
    a, b = max(runs, key=lambda r: r[1] - r[0])

    def refine(good: float, bad: float) -> float:
        while abs(good - bad) > resolution:
            mid = 0.5 * (good + bad)
            if ok(mid):
                good = mid
            else:
                bad = mid
        return good

    lower = float(grid[a]) if a == 0 else refine(float(grid[a]), float(grid[a - 1]))
    upper = float(grid[b]) if b == coarse - 1 else refine(float(grid[b]), float(grid[b + 1]))
    return ParamRange(lower, upper, resolution, tuple(log_), disjoint=len(runs) > 1)
