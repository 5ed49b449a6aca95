"""Reference transforms and beta expectations, checked against Monte Carlo and exact sums."""
import math
from fractions import Fraction

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import integrate, special as sc

from ssdorder.reference import (ConvexityClass, OrderStatSpec, ReferenceTransform, TransformKind,
                                beta_ratio_crossings, expected_transformed_beta, open_uniform)

ALL_KINDS = list(TransformKind)


class TestReferenceTransform:
    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_quantile_inverts_cdf(self, kind):
        t = ReferenceTransform(kind)
        p = np.linspace(0.01, 0.99, 50)
        assert_allclose(t.cdf(t.quantile(p)), p, rtol=1e-12)

    def test_known_points(self):
        assert ReferenceTransform.of("odds").quantile(0.5) == 1.0
        assert_allclose(ReferenceTransform.of("ifr").quantile(0.5), math.log(2))
        assert ReferenceTransform.of("logit").quantile(0.5) == 0.0
        assert ReferenceTransform.of("c").quantile(0.25) == 0.25

    def test_anchoring(self):
        assert ReferenceTransform.of("uniform").anchored_at_zero
        assert ReferenceTransform.of("odds").anchored_at_zero
        assert not ReferenceTransform.of("logit").anchored_at_zero

    def test_aliases_and_classes(self):
        assert ReferenceTransform.of(ConvexityClass.IFR).kind is TransformKind.EXPONENTIAL
        assert ReferenceTransform.of("CO").convexity_class is ConvexityClass.CO
        with pytest.raises(ValueError):
            ReferenceTransform.of("cubic")
        with pytest.raises(ValueError):
            ConvexityClass.parse("xx")

    def test_open_uniform_strictly_inside(self):
        u = open_uniform(np.random.default_rng(0), 100000)
        assert u.min() > 0 and u.max() < 1


class TestOrderStatSpec:
    def test_beta_params(self):
        assert OrderStatSpec(3, 5).beta_params == (3, 3)

    @pytest.mark.parametrize("i, n", [(0, 3), (4, 3), (1, 0)])
    def test_invalid(self, i, n):
        with pytest.raises(ValueError):
            OrderStatSpec(i, n)

    def test_non_integer(self):
        with pytest.raises(TypeError):
            OrderStatSpec(1.5, 3)


class TestExpectedTransformedBeta:
    def test_closed_forms(self):
        s = OrderStatSpec(3, 5)
        assert_allclose(expected_transformed_beta("uniform", s), 0.5)
        assert_allclose(expected_transformed_beta("logit", s), 0.0, atol=1e-14)
        assert_allclose(expected_transformed_beta("exponential", s), 1 / 3 + 1 / 4 + 1 / 5)
        assert_allclose(expected_transformed_beta("exponential", s), 0.78333333333333, rtol=1e-12)
        assert_allclose(expected_transformed_beta("odds", s), 1.5)
        assert expected_transformed_beta("odds", OrderStatSpec(4, 4)) == math.inf

    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_against_quadrature(self, kind):
        t = ReferenceTransform(kind)
        for i, n in [(1, 4), (2, 7), (5, 9), (3, 3), (10, 30)]:
            s = OrderStatSpec(i, n)
            exact = expected_transformed_beta(t, s)
            if math.isinf(exact):
                continue
            a, b = s.beta_params
            val, _ = integrate.quad(lambda p: float(t.quantile(p)) * math.exp(
                sc.xlogy(a - 1, p) + sc.xlog1py(b - 1, -p) - sc.betaln(a, b)), 0, 1, limit=200)
            assert_allclose(exact, val, rtol=1e-8, atol=1e-10)

    def test_against_monte_carlo(self):
        """100 random specs: closed form within 3 standard errors of the sample mean."""
        rng = np.random.default_rng(20240601)
        misses = 0
        for _ in range(100):
            kind = ALL_KINDS[rng.integers(4)]
            n = int(rng.integers(2, 40))
            i = int(rng.integers(1, n + 1))
            if kind is TransformKind.ODDS and i >= n - 2:
                i = max(1, n - 3)  # variance of the odds mean needs n - i > 2
                if i < 1 or n - i <= 2:
                    continue
            s = OrderStatSpec(i, n)
            t = ReferenceTransform(kind)
            draws = t.quantile(rng.beta(*s.beta_params, size=20000))
            se = draws.std(ddof=1) / math.sqrt(draws.size)
            if abs(draws.mean() - expected_transformed_beta(t, s)) > 3 * se:
                misses += 1
        # 3-SE bands miss ~0.3% of the time; allow a couple of misses in 100 draws
        assert misses <= 2


def _exact(kind, i, n):
    if kind is TransformKind.UNIFORM:
        return Fraction(i, n + 1)
    if kind is TransformKind.EXPONENTIAL:
        return sum(Fraction(1, k) for k in range(n - i + 1, n + 1))
    if kind is TransformKind.ODDS:
        return None if i == n else Fraction(i, n - i)
    return sum(Fraction(1, k) for k in range(1, i)) - sum(Fraction(1, k) for k in range(1, n - i + 1))


def test_exact_rational_values_match():
    for kind in ALL_KINDS:
        for n in range(1, 25):
            for i in range(1, n + 1):
                ex = _exact(kind, i, n)
                val = expected_transformed_beta(kind, OrderStatSpec(i, n))
                if ex is None:
                    assert val == math.inf
                else:
                    assert_allclose(val, float(ex), rtol=1e-13, atol=1e-14)


class TestBetaCrossings:
    def test_ratio_flag(self):
        r = beta_ratio_crossings(3, 2, 2, 4)
        assert r.ratio_monotone_increasing
        assert r.grid_ratio_monotone
        assert r.grid_sign_pattern == ("-", "+")
        assert r.grid_agrees

    def test_two_crossings_start_minus(self):
        r = beta_ratio_crossings(5, 5, 2, 2)
        assert not r.ratio_monotone_increasing
        assert r.density_sign_changes_le_2_starting_minus
        assert r.grid_sign_pattern == ("-", "+", "-")
        assert r.grid_agrees

    def test_not_applicable(self):
        r = beta_ratio_crossings(1, 3, 2, 2)
        assert not r.density_sign_changes_le_2_starting_minus

    def test_invalid(self):
        with pytest.raises(ValueError):
            beta_ratio_crossings(0, 1, 1, 1)
