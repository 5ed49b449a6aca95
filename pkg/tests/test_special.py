import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import special as sc

from ssdorder.special import (EULER_GAMMA, Accuracy, beta_cdf, beta_pdf, digamma, gamma_signed,
                              harmonic_tail, log_beta, log_gamma)


class TestLogGamma:
    @pytest.mark.parametrize("x, expected", [(1.0, 0.0), (0.5, math.log(math.sqrt(math.pi))),
                                             (10.0, math.log(362880.0))])
    def test_known_values(self, x, expected):
        assert_allclose(log_gamma(x), expected, atol=1e-12)

    def test_against_scipy_over_range(self):
        xs = np.geomspace(1e-6, 1e6, 200)
        assert_allclose([log_gamma(x) for x in xs], sc.gammaln(xs), atol=1e-12, rtol=1e-14)

    @pytest.mark.parametrize("x", [0.0, -1.0, -0.5])
    def test_domain(self, x):
        with pytest.raises(ValueError):
            log_gamma(x)


def test_gamma_signed_reflection():
    assert_allclose(gamma_signed(-1 / 3), sc.gamma(-1 / 3), rtol=1e-13)
    assert_allclose(gamma_signed(-2.5), sc.gamma(-2.5), rtol=1e-13)
    assert_allclose(gamma_signed(4.0), 6.0)
    with pytest.raises(ValueError):
        gamma_signed(-2.0)


class TestDigamma:
    def test_special_values(self):
        assert_allclose(digamma(1.0), -EULER_GAMMA, atol=1e-14)
        assert_allclose(digamma(0.5), -EULER_GAMMA - 2 * math.log(2), atol=1e-13)

    def test_against_scipy(self):
        xs = np.concatenate([np.geomspace(1e-4, 1e4, 300), np.arange(1, 200)])
        assert_allclose([digamma(x) for x in xs], sc.digamma(xs), atol=1e-10, rtol=1e-13)

    def test_recurrence(self):
        for x in np.linspace(0.05, 30, 97):
            assert_allclose(digamma(x + 1), digamma(x) + 1 / x, atol=1e-12)

    def test_integer_values_are_harmonic(self):
        # psi(k) = H_{k-1} - gamma
        for k in range(2, 60):
            assert_allclose(digamma(k), harmonic_tail(1, k - 1) - EULER_GAMMA, atol=1e-12)

    def test_domain(self):
        with pytest.raises(ValueError):
            digamma(0.0)


class TestHarmonicTail:
    def test_small(self):
        assert harmonic_tail(1, 1) == 1.0
        assert_allclose(harmonic_tail(2, 4), 1 / 2 + 1 / 3 + 1 / 4)

    def test_ordering_of_harmonic_tail_sums(self):
        # sum_{7}^{200} >= sum_{2}^{44} > sum_{8}^{200}
        assert harmonic_tail(7, 200) >= harmonic_tail(2, 44)
        assert harmonic_tail(2, 44) > harmonic_tail(8, 200)

    def test_matches_digamma_difference(self):
        for lo, hi in [(1, 10), (57, 200), (3, 5000)]:
            assert_allclose(harmonic_tail(lo, hi), sc.digamma(hi + 1) - sc.digamma(lo), rtol=1e-13)

    @pytest.mark.parametrize("lo, hi", [(0, 3), (5, 4)])
    def test_domain(self, lo, hi):
        with pytest.raises(ValueError):
            harmonic_tail(lo, hi)


class TestBeta:
    @pytest.mark.parametrize("x, a, b, expected", [(0.5, 1, 1, 1.0), (0.5, 2, 1, 1.0), (0.3, 2, 3, 1.764)])
    def test_pdf_values(self, x, a, b, expected):
        assert_allclose(beta_pdf(x, a, b), expected, rtol=1e-13)

    def test_pdf_endpoints(self):
        assert beta_pdf(0.0, 0.5, 2) == math.inf
        assert beta_pdf(1.0, 2, 0.5) == math.inf
        assert beta_pdf(0.0, 1, 3) == 3
        assert beta_pdf(0.0, 2, 3) == 0.0

    def test_pdf_against_scipy(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            a, b = rng.uniform(0.2, 30, 2)
            x = rng.uniform(0.001, 0.999)
            assert_allclose(beta_pdf(x, a, b), math.exp(sc.xlogy(a - 1, x) + sc.xlog1py(b - 1, -x) - sc.betaln(a, b)),
                            rtol=1e-10)

    def test_cdf_against_scipy(self):
        rng = np.random.default_rng(2)
        for _ in range(500):
            a, b = rng.uniform(0.1, 200, 2)
            x = rng.uniform(0, 1)
            assert_allclose(beta_cdf(x, a, b), sc.betainc(a, b, x), atol=1e-13, rtol=1e-10)

    def test_cdf_integer_parameters(self):
        # I_x(1, 1) = x and I_x(2, 1) = x^2
        for x in np.linspace(0, 1, 11):
            assert_allclose(beta_cdf(x, 1, 1), x, atol=1e-15)
            assert_allclose(beta_cdf(x, 2, 1), x * x, atol=1e-15)

    def test_cdf_symmetry(self):
        for a, b, x in [(3, 7, 0.2), (0.5, 0.5, 0.9), (40, 2, 0.95)]:
            assert_allclose(beta_cdf(x, a, b), 1 - beta_cdf(1 - x, b, a), atol=1e-14)

    @pytest.mark.parametrize("x, a, b", [(-0.1, 1, 1), (1.1, 1, 1), (0.5, 0, 1), (0.5, 1, -2)])
    def test_domain(self, x, a, b):
        with pytest.raises(ValueError):
            beta_cdf(x, a, b)
        with pytest.raises(ValueError):
            beta_pdf(x, a, b)

    def test_log_beta(self):
        assert_allclose(log_beta(2.5, 7.0), sc.betaln(2.5, 7.0), rtol=1e-14)


def test_accuracy_validation():
    assert Accuracy().abs_tol > 0
    with pytest.raises(ValueError):
        Accuracy(abs_tol=0.0)
