"""Special functions used throughout the package.

Scalar, dependency-free implementations of the digamma function, harmonic
tails and the beta distribution.  The regularized incomplete beta function
is evaluated with a modified Lentz continued fraction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

EULER_GAMMA = 0.57721566490153286060651209008240243

# B_{2k} / (2k) for k = 1..8, used by the digamma asymptotic expansion
_DIGAMMA_COEFFS = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
)

_CF_EPS = 1e-16
_CF_TINY = 1e-300
_CF_MAXITER = 20000


@dataclass(frozen=True)
class Accuracy:
    """Absolute/relative tolerance pair used by numerical routines."""

    abs_tol: float = 1e-12
    rel_tol: float = 1e-10

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")


def log_gamma(x: float) -> float:
    """Natural log of the gamma function for positive ``x``."""
    if not x > 0:
        raise ValueError(f"log_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


def gamma_signed(x: float) -> float:
    """Gamma function on the whole real line except the poles.

    Negative non-integer arguments are handled by reflection, e.g. the
    value Gamma(-1/3) that appears in Dagum maxima means.
    """
    if x <= 0 and float(x).is_integer():
        raise ValueError(f"gamma has a pole at {x!r}")
    if x > 0:
        return math.gamma(x)
    return math.pi / (math.sin(math.pi * x) * math.gamma(1.0 - x))


def digamma(x: float) -> float:
    """Digamma function psi(x) = d/dx log Gamma(x) for ``x > 0``."""
    if not x > 0:
        raise ValueError(f"digamma requires x > 0, got {x!r}")
    acc = 0.0
    while x < 10.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = 0.0
    for c in reversed(_DIGAMMA_COEFFS):
        series = series * inv2 + c
    return acc + math.log(x) - 0.5 / x - series * inv2


def harmonic_tail(lo: int, hi: int) -> float:
    """Return ``sum(1/k for k in lo..hi)``.

    Terms are accumulated from the smallest (``1/hi``) to the largest.
    """
    if lo < 1 or lo > hi:
        raise ValueError(f"need 1 <= lo <= hi, got lo={lo}, hi={hi}")
    total = 0.0
    for k in range(hi, lo - 1, -1):
        total += 1.0 / k
    return total


def _check_beta_args(x, a, b):
    if not (a > 0 and b > 0):
        raise ValueError(f"beta parameters must be positive, got a={a}, b={b}")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x!r}")


def log_beta(a: float, b: float) -> float:
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def beta_pdf(x: float, a: float, b: float) -> float:
    """Density of beta(a, b) at ``x``.

    At the endpoints the limiting value is returned, which is ``inf`` when
    the corresponding shape parameter is below one.
    """
    _check_beta_args(x, a, b)
    if x == 0.0:
        if a < 1:
            return math.inf
        return b if a == 1 else 0.0
    if x == 1.0:
        if b < 1:
            return math.inf
        return a if b == 1 else 0.0
    return math.exp((a - 1) * math.log(x) + (b - 1) * math.log1p(-x) - log_beta(a, b))


def _beta_cf(x: float, a: float, b: float) -> float:
    """Continued fraction for I_x(a, b) (modified Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_TINY:
        d = _CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAXITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge (x={x}, a={a}, b={b})")


def beta_cdf(x: float, a: float, b: float) -> float:
    """Regularized incomplete beta function I_x(a, b)."""
    _check_beta_args(x, a, b)
    if x == 0.0 or x == 1.0:
        return x
    log_front = a * math.log(x) + b * math.log1p(-x) - log_beta(a, b)
    if x < (a + 1.0) / (a + b + 2.0):
        return math.exp(log_front) * _beta_cf(x, a, b) / a
    return 1.0 - math.exp(log_front) * _beta_cf(1.0 - x, b, a) / b
