"""Parametric lifetime families and their convexity-class membership.

Distributions are immutable and evaluate vectorised CDFs, quantiles and
densities.  Sampling is inverse-transform from the quantile with an explicit
seed.  Membership in the classes C, CL, IFR and CO follows the published
classification table; a grid-based convexity check is reported alongside it.

Distribution spec strings have the form ``family(name=value, ...)``, for
example ``gamma(a=2,b=1)`` or ``dagum(a=3,p=2,b=3)``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np
from scipy import special as sc

from .reference import ConvexityClass, open_uniform
from .special import EULER_GAMMA


class Family(enum.Enum):
    UNIFORM = "uniform"
    POWER = "power"
    LOGISTIC = "logistic"
    GUMBEL = "gumbel"
    EXPONENTIAL = "exponential"
    NORMAL = "normal"
    BETA = "beta"
    GAMMA = "gamma"
    WEIBULL = "weibull"
    CAUCHY = "cauchy"
    LOGNORMAL = "lognormal"
    LOGLOGISTIC = "loglogistic"
    PARETO = "pareto"
    DAGUM = "dagum"


_FAMILY_ALIASES = {
    "powerfunction": Family.POWER,
    "power_function": Family.POWER,
    "log-logistic": Family.LOGLOGISTIC,
    "log_logistic": Family.LOGLOGISTIC,
    "fisk": Family.LOGLOGISTIC,
    "gaussian": Family.NORMAL,
}

# (name, default or None if required, lower bound kind): "pos" => > 0, "real" => any finite
_PARAMS: dict[Family, tuple[tuple[str, float | None, str], ...]] = {
    Family.UNIFORM: (("a", 0.0, "real"), ("b", 1.0, "real")),
    Family.POWER: (("a", None, "pos"), ("b", 1.0, "pos")),
    Family.LOGISTIC: (("mu", 0.0, "real"), ("sigma", 1.0, "pos")),
    Family.GUMBEL: (("mu", 0.0, "real"), ("sigma", 1.0, "pos")),
    Family.EXPONENTIAL: (("a", 1.0, "pos"),),
    Family.NORMAL: (("mu", 0.0, "real"), ("sigma", 1.0, "pos")),
    Family.BETA: (("a", None, "pos"), ("b", None, "pos")),
    Family.GAMMA: (("a", None, "pos"), ("b", 1.0, "pos")),
    Family.WEIBULL: (("a", None, "pos"), ("b", 1.0, "pos")),
    Family.CAUCHY: (("mu", 0.0, "real"), ("sigma", 1.0, "pos")),
    Family.LOGNORMAL: (("mu", 0.0, "real"), ("sigma", 1.0, "pos")),
    Family.LOGLOGISTIC: (("a", None, "pos"), ("b", 1.0, "pos")),
    Family.PARETO: (("a", None, "pos"), ("b", 1.0, "pos")),
    Family.DAGUM: (("a", None, "pos"), ("p", None, "pos"), ("b", 1.0, "pos")),
}


class ParseError(ValueError):
    """Malformed distribution spec string; ``position`` is a 0-based offset."""

    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.text = text
        self.position = position


def family_from_name(name: str) -> Family:
    key = name.strip().lower()
    if key in _FAMILY_ALIASES:
        return _FAMILY_ALIASES[key]
    try:
        return Family(key)
    except ValueError:
        raise ValueError(f"unknown distribution family {name!r}") from None


@dataclass(frozen=True)
class ParametricDistribution:
    """A named family with fixed parameters.

    Parameters are validated at construction; evaluation never raises for
    out-of-support arguments.
    """

    family: Family
    params: tuple[tuple[str, float], ...]

    def __init__(self, family, params: Mapping[str, float] | None = None, **kwargs):
        fam = family if isinstance(family, Family) else family_from_name(str(family))
        given = dict(params or {})
        given.update(kwargs)
        spec = _PARAMS[fam]
        names = [s[0] for s in spec]
        unknown = set(given) - set(names)
        if unknown:
            raise ValueError(f"{fam.value}: unknown parameter(s) {sorted(unknown)}; expected {names}")
        resolved = []
        for name, default, kind in spec:
            value = given.get(name, default)
            if value is None:
                raise ValueError(f"{fam.value}: missing required parameter {name!r}")
            value = float(value)
            if not math.isfinite(value):
                raise ValueError(f"{fam.value}: parameter {name} must be finite")
            if kind == "pos" and not value > 0:
                raise ValueError(f"{fam.value}: parameter {name} must be > 0, got {value}")
            resolved.append((name, value))
        if fam is Family.UNIFORM and not resolved[1][1] > resolved[0][1]:
            raise ValueError("uniform: need b > a")
        object.__setattr__(self, "family", fam)
        object.__setattr__(self, "params", tuple(resolved))

    @property
    def p(self) -> dict[str, float]:
        return dict(self.params)

    def with_params(self, **changes) -> "ParametricDistribution":
        new = self.p
        new.update(changes)
        return ParametricDistribution(self.family, new)

    def __str__(self):
        body = ",".join(f"{k}={_fmt(v)}" for k, v in self.params)
        return f"{self.family.value}({body})"

    # evaluation ---------------------------------------------------------

    def cdf(self, x):
        return _evaluate(_IMPL[self.family].cdf, x, self.p)

    def quantile(self, u):
        return _evaluate(_IMPL[self.family].quantile, u, self.p)

    def pdf(self, x):
        return _evaluate(_IMPL[self.family].pdf, x, self.p)

    def upper_quantile(self, q):
        """Inverse survival function, ``Q(1 - q)``, accurate for tiny ``q``."""
        impl = _IMPL[self.family]
        if impl.isf is None:
            return _evaluate(lambda v, **kw: impl.quantile(1.0 - v, **kw), q, self.p)
        return _evaluate(impl.isf, q, self.p)

    @property
    def support(self) -> tuple[float, float]:
        return _IMPL[self.family].support(**self.p)

    def mean(self) -> float:
        """Mean of the distribution; ``inf`` or ``nan`` when it does not exist."""
        return _IMPL[self.family].mean(**self.p)

    @property
    def upper_tail_index(self) -> float:
        """Exponent alpha with 1 - F(x) ~ x**-alpha (``inf`` for light tails)."""
        fam, p = self.family, self.p
        if fam in (Family.LOGLOGISTIC, Family.PARETO, Family.DAGUM):
            return p["a"]
        if fam is Family.CAUCHY:
            return 1.0
        return math.inf

    @property
    def lower_tail_index(self) -> float:
        return 1.0 if self.family is Family.CAUCHY else math.inf

    def sample(self, n: int, seed) -> np.ndarray:
        """Sorted i.i.d. sample of size ``n`` by inverse transform."""
        if n < 1:
            raise ValueError("sample size must be >= 1")
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        return np.sort(self.quantile(open_uniform(rng, n)))


def _fmt(v: float) -> str:
    return repr(int(v)) if float(v).is_integer() and abs(v) < 1e15 else repr(v)


def _evaluate(fn, x, params):
    arr = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore", under="ignore"):
        out = np.asarray(fn(arr, **params), dtype=float)
    return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class _Impl:
    cdf: Callable
    quantile: Callable
    pdf: Callable
    support: Callable
    mean: Callable
    isf: Callable | None = None


def _pos_log(x):
    return np.log(np.where(x > 0, x, 1.0))


def _uniform():
    return _Impl(
        cdf=lambda x, a, b: np.clip((x - a) / (b - a), 0.0, 1.0),
        quantile=lambda u, a, b: a + u * (b - a),
        pdf=lambda x, a, b: np.where((x >= a) & (x <= b), 1.0 / (b - a), 0.0),
        support=lambda a, b: (a, b),
        mean=lambda a, b: 0.5 * (a + b),
        isf=lambda q, a, b: b - q * (b - a),
    )


def _power():
    return _Impl(
        cdf=lambda x, a, b: np.where(x <= 0, 0.0, np.where(x >= b, 1.0, np.power(np.clip(x / b, 0, 1), a))),
        quantile=lambda u, a, b: b * np.power(u, 1.0 / a),
        pdf=lambda x, a, b: np.where((x > 0) & (x <= b), a / b * np.power(np.clip(x / b, 0, 1), a - 1), 0.0),
        support=lambda a, b: (0.0, b),
        mean=lambda a, b: a * b / (a + 1.0),
        isf=lambda q, a, b: b * np.exp(np.log1p(-q) / a),
    )


def _logistic():
    return _Impl(
        cdf=lambda x, mu, sigma: sc.expit((x - mu) / sigma),
        quantile=lambda u, mu, sigma: mu + sigma * sc.logit(u),
        pdf=lambda x, mu, sigma: sc.expit((x - mu) / sigma) * sc.expit((mu - x) / sigma) / sigma,
        support=lambda mu, sigma: (-math.inf, math.inf),
        mean=lambda mu, sigma: mu,
        isf=lambda q, mu, sigma: mu - sigma * sc.logit(q),
    )


def _gumbel():
    # minimum-type Gumbel, F(x) = 1 - exp(-exp((x - mu) / sigma))
    return _Impl(
        cdf=lambda x, mu, sigma: -np.expm1(-np.exp((x - mu) / sigma)),
        quantile=lambda u, mu, sigma: mu + sigma * np.log(-np.log1p(-u)),
        pdf=lambda x, mu, sigma: np.exp((x - mu) / sigma - np.exp((x - mu) / sigma)) / sigma,
        support=lambda mu, sigma: (-math.inf, math.inf),
        mean=lambda mu, sigma: mu - EULER_GAMMA * sigma,
        isf=lambda q, mu, sigma: mu + sigma * np.log(-np.log(q)),
    )


def _exponential():
    return _Impl(
        cdf=lambda x, a: np.where(x > 0, -np.expm1(-a * np.maximum(x, 0)), 0.0),
        quantile=lambda u, a: -np.log1p(-u) / a,
        pdf=lambda x, a: np.where(x >= 0, a * np.exp(-a * np.maximum(x, 0)), 0.0),
        support=lambda a: (0.0, math.inf),
        mean=lambda a: 1.0 / a,
        isf=lambda q, a: -np.log(q) / a,
    )


def _normal():
    return _Impl(
        cdf=lambda x, mu, sigma: sc.ndtr((x - mu) / sigma),
        quantile=lambda u, mu, sigma: mu + sigma * sc.ndtri(u),
        pdf=lambda x, mu, sigma: np.exp(-0.5 * ((x - mu) / sigma) ** 2) / (sigma * math.sqrt(2 * math.pi)),
        support=lambda mu, sigma: (-math.inf, math.inf),
        mean=lambda mu, sigma: mu,
        isf=lambda q, mu, sigma: mu - sigma * sc.ndtri(q),
    )


def _beta():
    def pdf(x, a, b):
        inside = (x > 0) & (x < 1)
        xc = np.where(inside, x, 0.5)
        val = np.exp((a - 1) * np.log(xc) + (b - 1) * np.log1p(-xc) - sc.betaln(a, b))
        return np.where(inside, val, 0.0)

    return _Impl(
        cdf=lambda x, a, b: sc.betainc(a, b, np.clip(x, 0.0, 1.0)),
        quantile=lambda u, a, b: sc.betaincinv(a, b, u),
        pdf=pdf,
        support=lambda a, b: (0.0, 1.0),
        mean=lambda a, b: a / (a + b),
        isf=lambda q, a, b: sc.betainccinv(a, b, q),
    )


def _gamma():
    def pdf(x, a, b):
        pos = x > 0
        xc = np.where(pos, x, 1.0)
        val = np.exp((a - 1) * np.log(xc / b) - xc / b - sc.gammaln(a)) / b
        return np.where(pos, val, 0.0)

    return _Impl(
        cdf=lambda x, a, b: sc.gammainc(a, np.maximum(x, 0.0) / b),
        quantile=lambda u, a, b: b * sc.gammaincinv(a, u),
        pdf=pdf,
        support=lambda a, b: (0.0, math.inf),
        mean=lambda a, b: a * b,
        isf=lambda q, a, b: b * sc.gammainccinv(a, q),
    )


def _weibull():
    def pdf(x, a, b):
        pos = x > 0
        z = np.where(pos, x, 1.0) / b
        return np.where(pos, a / b * np.power(z, a - 1) * np.exp(-np.power(z, a)), 0.0)

    return _Impl(
        cdf=lambda x, a, b: -np.expm1(-np.power(np.maximum(x, 0.0) / b, a)),
        quantile=lambda u, a, b: b * np.power(-np.log1p(-u), 1.0 / a),
        pdf=pdf,
        support=lambda a, b: (0.0, math.inf),
        mean=lambda a, b: b * math.gamma(1.0 + 1.0 / a),
        isf=lambda q, a, b: b * np.power(-np.log(q), 1.0 / a),
    )


def _cauchy():
    return _Impl(
        cdf=lambda x, mu, sigma: 0.5 + np.arctan((x - mu) / sigma) / math.pi,
        quantile=lambda u, mu, sigma: np.where(u <= 0.5, mu - sigma / np.tan(math.pi * u),
                                               mu + sigma / np.tan(math.pi * (1.0 - u))),
        pdf=lambda x, mu, sigma: 1.0 / (math.pi * sigma * (1.0 + ((x - mu) / sigma) ** 2)),
        support=lambda mu, sigma: (-math.inf, math.inf),
        mean=lambda mu, sigma: math.nan,
        isf=lambda q, mu, sigma: np.where(q <= 0.5, mu + sigma / np.tan(math.pi * q),
                                          mu - sigma / np.tan(math.pi * (1.0 - q))),
    )


def _lognormal():
    def pdf(x, mu, sigma):
        pos = x > 0
        lx = _pos_log(x)
        val = np.exp(-0.5 * ((lx - mu) / sigma) ** 2) / (np.where(pos, x, 1.0) * sigma * math.sqrt(2 * math.pi))
        return np.where(pos, val, 0.0)

    return _Impl(
        cdf=lambda x, mu, sigma: np.where(x > 0, sc.ndtr((_pos_log(x) - mu) / sigma), 0.0),
        quantile=lambda u, mu, sigma: np.exp(mu + sigma * sc.ndtri(u)),
        pdf=pdf,
        support=lambda mu, sigma: (0.0, math.inf),
        mean=lambda mu, sigma: math.exp(mu + 0.5 * sigma * sigma),
        isf=lambda q, mu, sigma: np.exp(mu - sigma * sc.ndtri(q)),
    )


def _loglogistic():
    def pdf(x, a, b):
        pos = x > 0
        z = np.where(pos, x, 1.0) / b
        za = np.power(z, a)
        return np.where(pos, a / b * np.power(z, a - 1) / (1.0 + za) ** 2, 0.0)

    return _Impl(
        cdf=lambda x, a, b: np.where(x > 0, sc.expit(a * (_pos_log(x) - math.log(b))), 0.0),
        quantile=lambda u, a, b: b * np.exp(sc.logit(u) / a),
        pdf=pdf,
        support=lambda a, b: (0.0, math.inf),
        mean=lambda a, b: (b * (math.pi / a) / math.sin(math.pi / a)) if a > 1 else math.inf,
        isf=lambda q, a, b: b * np.exp(-sc.logit(q) / a),
    )


def _pareto():
    return _Impl(
        cdf=lambda x, a, b: np.where(x > b, -np.expm1(a * (math.log(b) - _pos_log(x))), 0.0),
        quantile=lambda u, a, b: b * np.exp(-np.log1p(-u) / a),
        pdf=lambda x, a, b: np.where(x >= b, a / b * np.exp((a + 1) * (math.log(b) - _pos_log(x))), 0.0),
        support=lambda a, b: (b, math.inf),
        mean=lambda a, b: a * b / (a - 1.0) if a > 1 else math.inf,
        isf=lambda q, a, b: b * np.exp(-np.log(q) / a),
    )


def _dagum():
    # F(x) = (1 + (b/x)^a)^(-p)
    def cdf(x, a, p, b):
        pos = x > 0
        t = np.exp(a * (math.log(b) - _pos_log(x)))
        return np.where(pos, np.exp(-p * np.log1p(t)), 0.0)

    def quantile(u, a, p, b):
        return b * np.power(np.expm1(-np.log(u) / p), -1.0 / a)

    def isf(q, a, p, b):
        return b * np.power(np.expm1(-np.log1p(-q) / p), -1.0 / a)

    def pdf(x, a, p, b):
        pos = x > 0
        xc = np.where(pos, x, 1.0)
        t = np.exp(a * (math.log(b) - np.log(xc)))
        return np.where(pos, a * p / xc * t * np.exp(-(p + 1) * np.log1p(t)), 0.0)

    def mean(a, p, b):
        if a <= 1:
            return math.inf
        return b * math.exp(math.lgamma(p + 1 / a) + math.lgamma(1 - 1 / a) - math.lgamma(p))

    return _Impl(cdf=cdf, quantile=quantile, pdf=pdf, support=lambda a, p, b: (0.0, math.inf), mean=mean, isf=isf)


_IMPL: dict[Family, _Impl] = {
    Family.UNIFORM: _uniform(),
    Family.POWER: _power(),
    Family.LOGISTIC: _logistic(),
    Family.GUMBEL: _gumbel(),
    Family.EXPONENTIAL: _exponential(),
    Family.NORMAL: _normal(),
    Family.BETA: _beta(),
    Family.GAMMA: _gamma(),
    Family.WEIBULL: _weibull(),
    Family.CAUCHY: _cauchy(),
    Family.LOGNORMAL: _lognormal(),
    Family.LOGLOGISTIC: _loglogistic(),
    Family.PARETO: _pareto(),
    Family.DAGUM: _dagum(),
}


# spec strings ------------------------------------------------------------

def parse_spec(text: str) -> tuple[Family, dict[str, float]]:
    """Parse ``family(name=value,...)`` into a family and a parameter dict.

    Parameters may be left out; validation happens when the distribution
    is built.
    """
    pos = 0
    n = len(text)

    def skip_ws(k):
        while k < n and text[k].isspace():
            k += 1
        return k

    pos = skip_ws(pos)
    start = pos
    while pos < n and (text[pos].isalnum() or text[pos] in "_-"):
        pos += 1
    if pos == start:
        raise ParseError("expected a family name", text, pos)
    name = text[start:pos]
    try:
        family = family_from_name(name)
    except ValueError:
        raise ParseError(f"unknown family {name!r}", text, start) from None
    pos = skip_ws(pos)
    params: dict[str, float] = {}
    if pos == n:
        return family, params
    if text[pos] != "(":
        raise ParseError("expected '('", text, pos)
    pos = skip_ws(pos + 1)
    if pos < n and text[pos] == ")":
        pos += 1
    else:
        while True:
            pos = skip_ws(pos)
            kstart = pos
            while pos < n and (text[pos].isalnum() or text[pos] == "_"):
                pos += 1
            if pos == kstart:
                raise ParseError("expected a parameter name", text, pos)
            key = text[kstart:pos]
            if key in params:
                raise ParseError(f"duplicate parameter {key!r}", text, kstart)
            pos = skip_ws(pos)
            if pos >= n or text[pos] != "=":
                raise ParseError("expected '='", text, pos)
            pos = skip_ws(pos + 1)
            vstart = pos
            while pos < n and text[pos] not in ",)" and not text[pos].isspace():
                pos += 1
            raw = text[vstart:pos]
            try:
                params[key] = float(raw)
            except ValueError:
                raise ParseError(f"invalid number {raw!r}", text, vstart) from None
            pos = skip_ws(pos)
            if pos < n and text[pos] == ",":
                pos += 1
                continue
            if pos < n and text[pos] == ")":
                pos += 1
                break
            raise ParseError("expected ',' or ')'", text, pos)
    pos = skip_ws(pos)
    if pos != n:
        raise ParseError("unexpected trailing characters", text, pos)
    return family, params


def parse_distribution(text: str) -> ParametricDistribution:
    family, params = parse_spec(text)
    try:
        return ParametricDistribution(family, params)
    except ValueError as exc:
        raise ParseError(str(exc), text, 0) from None


# class membership --------------------------------------------------------

@dataclass(frozen=True)
class Membership:
    """Class membership as given by the classification table.

    ``numeric`` is an independent grid check of convexity of H^{-1}(F);
    ``None`` when no check was possible.
    """

    member: bool
    rule: str
    numeric: bool | None = None

    @property
    def agrees(self) -> bool:
        return self.numeric is None or self.numeric == self.member

    def __bool__(self):
        return self.member


def _always(value):
    return lambda p: (value, "yes" if value else "no")


def _shape_at_least_one(p):
    return p["a"] >= 1, "yes iff a >= 1"


_C, _CL, _IFR, _CO = ConvexityClass.C, ConvexityClass.CL, ConvexityClass.IFR, ConvexityClass.CO

_TABLE: dict[Family, dict[ConvexityClass, Callable]] = {
    Family.UNIFORM: {_C: _always(True), _CL: _always(False), _IFR: _always(True), _CO: _always(True)},
    Family.POWER: {_C: _shape_at_least_one, _CL: _always(False), _IFR: _shape_at_least_one, _CO: _shape_at_least_one},
    Family.LOGISTIC: {_C: _always(False), _CL: _always(True), _IFR: _always(True), _CO: _always(True)},
    Family.GUMBEL: {_C: _always(False), _CL: _always(True), _IFR: _always(True), _CO: _always(True)},
    Family.EXPONENTIAL: {_C: _always(False), _CL: _always(False), _IFR: _always(True), _CO: _always(True)},
    Family.NORMAL: {_C: _always(False), _CL: _always(False), _IFR: _always(True), _CO: _always(True)},
    Family.BETA: {
        _C: lambda p: (p["a"] <= 1 and p["b"] <= 1, "yes iff a <= 1 and b <= 1 (as tabulated)"),
        _CL: _always(False),
        _IFR: _shape_at_least_one,
        _CO: _shape_at_least_one,
    },
    Family.GAMMA: {_C: _always(False), _CL: _always(False), _IFR: _shape_at_least_one, _CO: _shape_at_least_one},
    Family.WEIBULL: {_C: _always(False), _CL: _always(False), _IFR: _shape_at_least_one, _CO: _shape_at_least_one},
    Family.CAUCHY: {_C: _always(False), _CL: _always(False), _IFR: _always(False), _CO: _always(True)},
    Family.LOGNORMAL: {_C: _always(False), _CL: _always(False), _IFR: _always(False), _CO: _always(True)},
    Family.LOGLOGISTIC: {_C: _always(False), _CL: _always(False), _IFR: _always(False), _CO: _shape_at_least_one},
    Family.PARETO: {_C: _always(False), _CL: _always(False), _IFR: _always(False), _CO: _shape_at_least_one},
}


def numeric_convexity(d: ParametricDistribution, cls: ConvexityClass, grid_size: int = 200,
                      p_range: tuple[float, float] = (1e-3, 1 - 1e-3)) -> bool:
    """Grid check that ``H^{-1}(F)`` has nondecreasing difference quotients.

    The grid is uniform in x between the quantiles at ``p_range``.
    """
    lo, hi = (float(v) for v in d.quantile(np.asarray(p_range)))
    x = np.linspace(lo, hi, grid_size)
    with np.errstate(divide="ignore", invalid="ignore"):
        y = np.asarray(cls.transform.quantile(d.cdf(x)), dtype=float)
    if not np.all(np.isfinite(y)):
        return False
    slopes = np.diff(y) / np.diff(x)
    tol = 1e-7 * (np.max(np.abs(slopes)) + 1e-300)
    return bool(np.all(np.diff(slopes) >= -tol))


def class_membership(d: ParametricDistribution, cls: ConvexityClass) -> Membership:
    """Membership of ``d`` in ``cls``.

    Families outside the table (Dagum) are decided by support arguments for
    C and CL, by the heavy upper tail for IFR, and by the grid check for CO.
    """
    cls = cls if isinstance(cls, ConvexityClass) else ConvexityClass.parse(str(cls))
    numeric = numeric_convexity(d, cls)
    row = _TABLE.get(d.family)
    if row is not None:
        member, rule = row[cls](d.p)
        return Membership(bool(member), f"{d.family.value}/{cls.value}: {rule}", numeric)
    if cls in (ConvexityClass.C, ConvexityClass.CL):
        return Membership(False, f"{d.family.value}/{cls.value}: no (support (0, inf))", numeric)
    if cls is ConvexityClass.IFR:
        return Membership(False, f"{d.family.value}/IFR: no (polynomial upper tail)", numeric)
    return Membership(numeric, f"{d.family.value}/CO: numerical grid check", numeric)


def member_classes(d: ParametricDistribution) -> list[ConvexityClass]:
    return [c for c in ConvexityClass if class_membership(d, c).member]
