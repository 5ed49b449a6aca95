import math

import mpmath as mp
import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import integrate, stats
from scipy.optimize import brentq

from ssdorder.catalog import parse_distribution as P
from ssdorder.dominance import (DivergentMeanError, NotDominatedError, PreconditionError, Sign, Verdict,
                                cdf_crossings, dominance_degree, maxima_mean, mixture_quantile,
                                order_stat_cdf, order_stat_mean, order_stat_mean_exists, sign_changes,
                                ssd_numeric, ssd_order_statistics)
from ssdorder.reference import OrderStatSpec

DAGUM = P("dagum(a=3,p=2,b=3)")
LL22 = P("loglogistic(a=2,b=2)")


class TestSignChanges:
    def test_linear(self):
        r = sign_changes(lambda x: x - 0.5, interval=(0, 1))
        assert r.count == 1 and r.first_sign is Sign.MINUS
        assert_allclose(r.crossing_locations, [0.5], atol=1e-12)

    def test_cubic_roots(self):
        roots = [0.2, 0.5, 0.7]
        r = sign_changes(lambda x: (x - 0.2) * (x - 0.5) * (x - 0.7), interval=(0, 1))
        assert r.count == 3 and r.first_sign is Sign.MINUS
        assert_allclose(r.crossing_locations, roots, atol=1e-12)

    def test_no_crossing(self):
        r = sign_changes(lambda x: np.exp(x), interval=(-3, 3))
        assert r.count == 0 and r.first_sign is Sign.PLUS
        assert not r.single_crossing_from_below

    def test_touching_zero_is_not_a_crossing(self):
        r = sign_changes(lambda x: (x - 0.5) ** 2 + 1e-3, interval=(0, 1))
        assert r.count == 0


class TestCrossings:
    def test_dagum_vs_loglogistic(self):
        r = cdf_crossings(DAGUM, LL22)
        assert r.count == 1 and r.first_sign is Sign.MINUS
        mp.mp.dps = 30
        root = mp.findroot(lambda x: (1 + 27 / x**3) ** -2 - 1 / (1 + (x / 2) ** -2), 13.5)
        assert_allclose(r.crossing_locations[0], float(root), rtol=1e-10)
        assert abs(r.crossing_locations[0] - 13.57) < 0.05

    def test_loglogistic_closed_form_matches_scan(self):
        dX, dY = P("loglogistic(a=4,b=2)"), P("loglogistic(a=3,b=1)")
        closed = cdf_crossings(dX, dY)
        probe = mixture_quantile([dX.quantile, dY.quantile], [dX.cdf, dY.cdf])
        scanned = sign_changes(lambda x: dX.cdf(x) - dY.cdf(x), probe=probe)
        assert closed.count == scanned.count == 1
        assert closed.first_sign is scanned.first_sign
        assert_allclose(closed.crossing_locations, scanned.crossing_locations, rtol=1e-9)

    def test_equal_shapes(self):
        r = cdf_crossings(P("loglogistic(a=3,b=2)"), P("loglogistic(a=3,b=1)"))
        assert r.count == 0 and r.first_sign is Sign.MINUS

    def test_generic_families(self):
        r = cdf_crossings(P("gamma(a=2,b=1)"), P("exponential(a=0.5)"))
        # near 0 the gamma CDF is ~x^2/2 against ~x/2, so the difference starts negative
        assert r.count == 1
        assert r.first_sign is Sign.MINUS
        root = brentq(lambda x: stats.gamma(2).cdf(x) - stats.expon(scale=2).cdf(x), 0.5, 10, xtol=1e-14)
        assert_allclose(r.crossing_locations[0], root, rtol=1e-10)


class TestSsdNumeric:
    def test_equal_distributions(self):
        d = P("gamma(a=2)")
        grid = d.quantile(np.linspace(0.001, 0.999, 200))
        res = ssd_numeric(d.cdf, d.cdf, grid, d.mean(), d.mean())
        assert res.verdict is Verdict.HOLDS

    def test_mean_preserving_spread(self):
        # a normal dominates any wider normal with the same mean; the converse fails
        a, b = P("normal(mu=0,sigma=1)"), P("normal(mu=0,sigma=2)")
        grid = np.linspace(-20, 20, 801)
        assert ssd_numeric(a.cdf, b.cdf, grid, 0.0, 0.0).verdict is Verdict.HOLDS
        res = ssd_numeric(b.cdf, a.cdf, grid, 0.0, 0.0)
        assert res.verdict is Verdict.FAILS
        assert_allclose(res.worst_x, 0.0, atol=0.05)

    def test_first_order_shift(self):
        a, b = P("exponential(a=1)"), P("exponential(a=2)")
        grid = np.linspace(0, 60, 400)
        assert ssd_numeric(a.cdf, b.cdf, grid, 1.0, 0.5).verdict is Verdict.HOLDS

    def test_order_statistics_helper(self):
        d = P("gamma(a=2,b=2)")
        assert ssd_order_statistics(d, OrderStatSpec(194, 200), d, OrderStatSpec(43, 44)).verdict is Verdict.HOLDS
        assert ssd_order_statistics(d, OrderStatSpec(193, 200), d, OrderStatSpec(43, 44)).verdict is Verdict.FAILS


class TestOrderStatistics:
    def test_cdf_is_beta_of_parent(self):
        d = P("weibull(a=2)")
        s = OrderStatSpec(3, 7)
        x = np.linspace(0.1, 3, 20)
        # P(X_{3:7} <= x) = P(at least 3 of 7 below x)
        p = d.cdf(x)
        expected = stats.binom.sf(2, 7, p)
        assert_allclose(order_stat_cdf(d, s)(x), expected, rtol=1e-12)

    def test_uniform_means(self):
        d = P("uniform(a=0,b=1)")
        for n in (1, 5, 17, 40):
            for i in range(1, n + 1):
                assert_allclose(order_stat_mean(d, OrderStatSpec(i, n)), i / (n + 1), rtol=1e-10)

    def test_exponential_means(self):
        d = P("exponential(a=1)")
        assert_allclose(order_stat_mean(d, OrderStatSpec(3, 5)), 1 / 5 + 1 / 4 + 1 / 3, rtol=1e-10)

    def test_against_direct_quadrature(self):
        d = P("lognormal(mu=0.2,sigma=0.7)")
        s = OrderStatSpec(4, 9)
        f = lambda x: x * 9 * stats.binom.pmf(3, 8, d.cdf(x)) * d.pdf(x)
        val, _ = integrate.quad(f, 0, np.inf, limit=200)
        assert_allclose(order_stat_mean(d, s), val, rtol=1e-8)

    def test_existence(self):
        d = P("pareto(a=0.5)")
        assert not order_stat_mean_exists(d, OrderStatSpec(5, 5))
        assert order_stat_mean_exists(d, OrderStatSpec(1, 5))   # tail index 0.5 * 5 > 1
        with pytest.raises(DivergentMeanError):
            order_stat_mean(d, OrderStatSpec(5, 5))
        assert not order_stat_mean_exists(P("cauchy"), OrderStatSpec(1, 1))
        assert order_stat_mean_exists(P("cauchy"), OrderStatSpec(2, 3))

    def test_gamma_mean_margins_around_rank_194(self):
        d = P("gamma(a=2,b=2)")
        ref = order_stat_mean(d, OrderStatSpec(43, 44))
        assert order_stat_mean(d, OrderStatSpec(194, 200)) - ref > 0.15
        assert order_stat_mean(d, OrderStatSpec(193, 200)) - ref < -0.18


class TestMaximaMean:
    def test_closed_form_matches_quadrature(self):
        for d in (DAGUM, LL22, P("loglogistic(a=5,b=0.5)")):
            for k in (1, 2, 5, 13):
                closed = maxima_mean(d, k)
                numeric = order_stat_mean(d, OrderStatSpec(k, k))
                assert_allclose(closed, numeric, rtol=1e-6)

    def test_dagum_formula(self):
        # E X_{k:k} = -Gamma(-1/3) Gamma(1/3 + 2k) / Gamma(2k) for the 27-form
        for k in (1, 4, 9, 10):
            expected = -math.gamma(-1 / 3) * math.gamma(1 / 3 + 2 * k) / math.gamma(2 * k)
            assert_allclose(maxima_mean(DAGUM, k), expected, rtol=1e-12)

    def test_divergent(self):
        with pytest.raises(DivergentMeanError):
            maxima_mean(P("loglogistic(a=1,b=1)"), 2)


class TestDominanceDegree:
    def test_dagum_vs_loglogistic_degree_9(self):
        deg = dominance_degree(DAGUM, LL22, k_max=20)
        assert deg.k == 9
        assert not deg.fsd and not deg.exhausted
        assert deg.allows(9) and not deg.allows(10)

    def test_fsd(self):
        deg = dominance_degree(P("exponential(a=1)"), P("exponential(a=2)"))
        assert deg.fsd and deg.allows(10**6)

    def test_precondition(self):
        with pytest.raises(PreconditionError):
            dominance_degree(P("exponential(a=2)"), P("exponential(a=1)"))  # F_X above F_Y everywhere
        with pytest.raises(PreconditionError):
            dominance_degree(P("exponential(a=0.5)"), P("gamma(a=2,b=1)"))  # first sign plus

    def test_not_dominated(self):
        # crossing from below but smaller mean
        with pytest.raises(NotDominatedError):
            dominance_degree(P("loglogistic(a=4,b=1)"), P("loglogistic(a=2,b=1.3)"))

    def test_exhaustion_flag(self):
        deg = dominance_degree(P("loglogistic(a=6,b=2)"), P("loglogistic(a=3,b=1)"), k_max=5)
        assert deg.exhausted and deg.k == 5
