"""Reference distributions H and expectations of H^{-1} applied to beta variables.

Each convexity class of parent distributions is defined through a reference
CDF ``H``: a parent ``F`` belongs to the class when ``H^{-1}(F)`` is convex.
For ``B ~ beta(i, n - i + 1)`` the mean of ``H^{-1}(B)`` has a closed form,
and comparing those means for two order statistics is what the dominance
conditions in :mod:`ssdorder.conditions` boil down to.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sc

from .special import beta_pdf, digamma, harmonic_tail


class TransformKind(enum.Enum):
    UNIFORM = "uniform"
    LOGIT = "logit"
    EXPONENTIAL = "exponential"
    ODDS = "odds"


class ConvexityClass(enum.Enum):
    """Classes of parent CDFs, named after the convex transform they require."""

    C = "C"
    CL = "CL"
    IFR = "IFR"
    CO = "CO"

    @classmethod
    def parse(cls, text: str) -> "ConvexityClass":
        try:
            return cls[text.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown convexity class {text!r}; expected one of c, cl, ifr, co") from None

    @property
    def transform(self) -> "ReferenceTransform":
        return ReferenceTransform(_CLASS_TO_KIND[self])


@dataclass(frozen=True)
class ReferenceTransform:
    """One of the four reference CDFs ``H`` together with its quantile ``H^{-1}``.

    ``cdf`` and ``quantile`` accept scalars or arrays.
    """

    kind: TransformKind

    @classmethod
    def of(cls, name) -> "ReferenceTransform":
        if isinstance(name, ReferenceTransform):
            return name
        if isinstance(name, TransformKind):
            return cls(name)
        if isinstance(name, ConvexityClass):
            return name.transform
        key = str(name).strip().lower()
        if key in _ALIASES:
            return cls(_ALIASES[key])
        return cls(TransformKind(key))

    @property
    def anchored_at_zero(self) -> bool:
        """True when H(0) = H^{-1}(0) = 0, which the GCM test needs."""
        return self.kind is not TransformKind.LOGIT

    @property
    def convexity_class(self) -> ConvexityClass:
        return _KIND_TO_CLASS[self.kind]

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        k = self.kind
        if k is TransformKind.UNIFORM:
            out = np.clip(x, 0.0, 1.0)
        elif k is TransformKind.LOGIT:
            out = sc.expit(x)
        elif k is TransformKind.EXPONENTIAL:
            out = np.where(x > 0, -np.expm1(-np.maximum(x, 0.0)), 0.0)
        else:
            xp = np.maximum(x, 0.0)
            out = np.where(x > 0, xp / (1.0 + xp), 0.0)
        return out[()] if out.ndim == 0 else out

    def quantile(self, p):
        p = np.asarray(p, dtype=float)
        k = self.kind
        with np.errstate(divide="ignore"):
            if k is TransformKind.UNIFORM:
                out = p.copy()
            elif k is TransformKind.LOGIT:
                out = sc.logit(p)
            elif k is TransformKind.EXPONENTIAL:
                out = -np.log1p(-p)
            else:
                out = p / (1.0 - p)
        return out[()] if out.ndim == 0 else out

    def sample(self, size, rng: np.random.Generator):
        """Draw from H by inverse transform."""
        return self.quantile(open_uniform(rng, size))


_CLASS_TO_KIND = {
    ConvexityClass.C: TransformKind.UNIFORM,
    ConvexityClass.CL: TransformKind.LOGIT,
    ConvexityClass.IFR: TransformKind.EXPONENTIAL,
    ConvexityClass.CO: TransformKind.ODDS,
}
_KIND_TO_CLASS = {v: k for k, v in _CLASS_TO_KIND.items()}
_ALIASES = {
    "c": TransformKind.UNIFORM,
    "cl": TransformKind.LOGIT,
    "ifr": TransformKind.EXPONENTIAL,
    "co": TransformKind.ODDS,
    "logistic": TransformKind.LOGIT,
    "loglogistic": TransformKind.ODDS,
}


def open_uniform(rng: np.random.Generator, size) -> np.ndarray:
    """Uniform variates strictly inside (0, 1) on a 2**-53 lattice."""
    k = rng.integers(0, 2**53, size=size, dtype=np.int64)
    return (k.astype(float) + 0.5) * 2.0**-53


@dataclass(frozen=True, order=True)
class OrderStatSpec:
    """The order statistic ``X_{i:n}``, i.e. an (n-i+1)-out-of-n system lifetime."""

    i: int
    n: int

    def __post_init__(self):
        if not (isinstance(self.i, (int, np.integer)) and isinstance(self.n, (int, np.integer))):
            raise TypeError("rank and size must be integers")
        if not 1 <= self.i <= self.n:
            raise ValueError(f"need 1 <= i <= n, got i={self.i}, n={self.n}")

    @property
    def beta_params(self) -> tuple[int, int]:
        return self.i, self.n - self.i + 1

    def __str__(self):
        return f"X_{{{self.i}:{self.n}}}"


def expected_transformed_beta(t, s: OrderStatSpec) -> float:
    """Mean of ``H^{-1}(B)`` for ``B ~ beta(i, n - i + 1)``.

    Returns ``math.inf`` for the odds transform at ``i == n``, where the
    expectation diverges.
    """
    t = ReferenceTransform.of(t)
    i, n = s.i, s.n
    k = t.kind
    if k is TransformKind.UNIFORM:
        return i / (n + 1)
    if k is TransformKind.LOGIT:
        return digamma(i) - digamma(n - i + 1)
    if k is TransformKind.EXPONENTIAL:
        return harmonic_tail(n - i + 1, n)
    if i == n:
        return math.inf
    return i / (n - i)


@dataclass(frozen=True)
class BetaCrossingReport:
    ratio_monotone_increasing: bool
    density_sign_changes_le_2_starting_minus: bool
    grid_ratio_monotone: bool
    grid_sign_pattern: tuple[str, ...]
    grid_agrees: bool


def beta_ratio_crossings(a1, b1, a2, b2, grid_size: int = 10_000) -> BetaCrossingReport:
    """Crossing structure of two beta densities.

    The two flags come from the parameter conditions (``a1 >= a2, b1 <= b2``
    for a monotone likelihood ratio; ``a1 >= a2`` for at most two sign
    changes of ``f1 - f2`` starting with minus).  A grid scan over (0, 1)
    re-derives both facts and ``grid_agrees`` reports whether it matches.
    """
    for v in (a1, b1, a2, b2):
        if not v > 0:
            raise ValueError("beta parameters must be positive")
    ratio_flag = a1 >= a2 and b1 <= b2
    crossing_flag = a1 >= a2

    x = (np.arange(grid_size) + 0.5) / grid_size
    log_ratio = ((a1 - a2) * np.log(x) + (b1 - b2) * np.log1p(-x)
                 + sc.betaln(a2, b2) - sc.betaln(a1, b1))
    steps = np.diff(log_ratio)
    grid_monotone = bool(np.all(steps >= -1e-12 * (1.0 + np.abs(log_ratio[1:]))))

    diff = np.array([beta_pdf(v, a1, b1) - beta_pdf(v, a2, b2) for v in x])
    scale = np.max(np.abs(diff)) if diff.size else 0.0
    signs = np.sign(np.where(np.abs(diff) <= 1e-12 * max(scale, 1.0), 0.0, diff))
    pattern = []
    for s in signs:
        if s == 0:
            continue
        sym = "+" if s > 0 else "-"
        if not pattern or pattern[-1] != sym:
            pattern.append(sym)
    grid_crossing_ok = len(pattern) <= 3 and (not pattern or pattern[0] == "-")
    # a monotone ratio can only produce -,+ (or nothing)
    grid_ratio_ok = grid_monotone and len(pattern) <= 2 and (not pattern or pattern[0] == "-")
    agrees = (not ratio_flag or grid_ratio_ok) and (not crossing_flag or grid_crossing_ok)
    return BetaCrossingReport(
        ratio_monotone_increasing=ratio_flag,
        density_sign_changes_le_2_starting_minus=crossing_flag,
        grid_ratio_monotone=grid_monotone,
        grid_sign_pattern=tuple(pattern),
        grid_agrees=agrees,
    )
