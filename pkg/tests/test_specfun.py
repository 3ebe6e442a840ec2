"""Special-function kernels against high-precision and library oracles."""

import math

import mpmath
import numpy as np
import pytest
import scipy.special as sps
from hypothesis import given, settings, strategies as st

from ongraph import DomainError, NonConvergenceError, gamma_ratio, hyp2f1, log_gamma

mpmath.mp.dps = 30


def _releq(x, ref, tol):
    assert abs(x - ref) <= tol * max(1.0, abs(ref)), (x, ref)


class TestLogGamma:
    def test_known_values(self):
        assert abs(log_gamma(1.0)) < 1e-13
        _releq(log_gamma(5.0), math.log(24.0), 1e-13)
        _releq(log_gamma(0.5), 0.5 * math.log(math.pi), 1e-12)

    def test_against_mpmath_grid(self):
        # relative where |ref| >= 1, absolute near the zeros of log Gamma
        xs = np.concatenate([
            np.logspace(-3, 8, 60),
            np.linspace(0.05, 3.0, 40),
        ])
        for x in xs:
            ref = float(mpmath.loggamma(mpmath.mpf(float(x))))
            _releq(log_gamma(float(x)), ref, 1e-12)

    def test_recurrence(self):
        # log Gamma(x+1) = log Gamma(x) + log x, absolute 1e-12 on [0.5, 100]
        for x in np.linspace(0.5, 100.0, 400):
            lhs = log_gamma(x + 1.0)
            rhs = log_gamma(x) + math.log(x)
            assert abs(lhs - rhs) < 1e-12 * max(1.0, abs(rhs))

    def test_reflection(self):
        for x in np.linspace(0.01, 0.49, 25):
            lhs = log_gamma(x) + log_gamma(1.0 - x)
            rhs = math.log(math.pi / math.sin(math.pi * x))
            assert abs(lhs - rhs) < 1e-12 * max(1.0, abs(rhs))

    @pytest.mark.parametrize("bad", [0.0, -1.0, -0.5])
    def test_domain(self, bad):
        with pytest.raises(DomainError):
            log_gamma(bad)


class TestGammaRatio:
    def test_telescoping_values(self):
        _releq(gamma_ratio(3, 1), 0.25, 1e-13)
        _releq(gamma_ratio(7, 2), 1.0 / 72.0, 1e-13)

    def test_pinned_value(self):
        # Gamma(11)/Gamma(11.5), frozen from an mpmath evaluation
        _releq(gamma_ratio(10, 0.5), 0.3049559608390432, 1e-12)

    def test_positive_decreasing_in_beta(self):
        vals = [gamma_ratio(10, b) for b in (0.5, 1.0, 2.0, 3.5)]
        assert all(v > 0 for v in vals)
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_asymptotic_normalisation(self):
        # value * n^beta -> 1; at n = 1e6 within 1e-5 relative
        for beta in (0.5, 1.0, 2.0):
            assert abs(gamma_ratio(1e6, beta) * 1e6 ** beta - 1.0) < 1e-5

    def test_stirling_matches_direct_at_switch(self):
        # the two evaluation routes agree where the implementation switches
        n = 1.0e6
        for beta in (0.25, 1.0, 3.0):
            direct = math.exp(log_gamma(n + 1.0) - log_gamma(n + 1.0 + beta))
            stirling = n ** -beta * (1.0 - 0.5 * beta * (beta + 1.0) / n)
            assert abs(direct / stirling - 1.0) < 1e-6

    @settings(max_examples=60, deadline=None)
    @given(n=st.floats(0.0, 1e3), b1=st.floats(0.01, 5.0), b2=st.floats(0.01, 5.0))
    def test_multiplicative(self, n, b1, b2):
        lhs = gamma_ratio(n, b1 + b2)
        rhs = gamma_ratio(n, b1) * gamma_ratio(n + b1, b2)
        assert abs(lhs - rhs) <= 1e-12 * max(abs(lhs), abs(rhs), 1e-300)

    def test_domain(self):
        with pytest.raises(DomainError):
            gamma_ratio(-1, 1.0)
        with pytest.raises(DomainError):
            gamma_ratio(3, 0.0)


class TestHyp2f1:
    def test_z_zero(self):
        assert hyp2f1(2.3, 0.7, 1.9, 0.0) == 1.0

    def test_a_minus_one(self):
        b, c, z = 1.7, 2.4, 0.55
        _releq(hyp2f1(-1.0, b, c, z), 1.0 - b * z / c, 1e-14)

    def test_log_identity(self):
        # 2F1(1,1;2;z) = -log(1-z)/z at z = 1/3
        _releq(hyp2f1(1, 1, 2, 1.0 / 3.0), 3.0 * math.log(1.5), 1e-13)

    @settings(max_examples=40, deadline=None)
    @given(a=st.sampled_from([-1.0, -2.0, -3.0]),
           b=st.floats(0.1, 4.0), c=st.floats(0.5, 4.0),
           z=st.floats(-0.9, 0.9))
    def test_terminating_polynomial(self, a, b, c, z):
        m = int(-a)
        expected = 0.0
        poch_a = poch_b = poch_c = fact = 1.0
        for i in range(m + 1):
            expected += poch_a * poch_b / (poch_c * fact) * z ** i
            poch_a *= a + i
            poch_b *= b + i
            poch_c *= c + i
            fact *= i + 1.0
        _releq(hyp2f1(a, b, c, z), expected, 1e-12)

    def test_against_scipy(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            a, b = rng.uniform(-3, 3, 2)
            c = rng.uniform(0.3, 4.0)
            z = rng.uniform(-0.7, 0.7)
            _releq(hyp2f1(a, b, c, z), float(sps.hyp2f1(a, b, c, z)), 1e-10)

    def test_domain(self):
        with pytest.raises(DomainError):
            hyp2f1(1.0, 1.0, 2.0, 1.0)
        with pytest.raises(DomainError):
            hyp2f1(1.0, 1.0, 2.0, -1.3)
        with pytest.raises(DomainError):
            hyp2f1(1.0, 1.0, 0.0, 0.5)
        with pytest.raises(DomainError):
            hyp2f1(1.0, 1.0, -2.0, 0.5)

    def test_cap(self):
        with pytest.raises(NonConvergenceError):
            hyp2f1(1.0, 1.0, 2.0, 0.9999)
