"""Special-function kernel against closed forms and frozen mpmath values."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from betafrechet import specfun as sf
from betafrechet.errors import ConvergenceError, DomainError

mpmath = pytest.importorskip("mpmath")

EULER = 0.5772156649015329


class TestLnGamma:
    @pytest.mark.parametrize("x, expected", [(1.0, 0.0), (5.0, math.log(24.0)),
                                             (0.5, 0.5 * math.log(math.pi))])
    def test_closed_forms(self, x, expected):
        assert abs(sf.ln_gamma(x) - expected) <= 1e-13

    def test_against_mpmath_over_range(self):
        for x in np.geomspace(1e-6, 1e6, 241):
            ref = float(mpmath.loggamma(mpmath.mpf(float(x))))
            assert abs(sf.ln_gamma(x) - ref) <= 1e-13 * max(1.0, abs(ref))

    @pytest.mark.parametrize("x", [0.0, -1.0, math.inf, math.nan])
    def test_domain(self, x):
        with pytest.raises(DomainError):
            sf.ln_gamma(x)

    def test_ln_beta_large_argument(self):
        # asymptotic branch for one very large argument
        for a, b in [(0.41, 1.2e5), (1.3, 1e6), (7.8, 3e7)]:
            ref = float(mpmath.log(mpmath.beta(a, b)))
            assert abs(sf.ln_beta(a, b) - ref) <= 1e-13 * abs(ref)


class TestRecipGamma:
    def test_positive_integer(self):
        r = sf.recip_gamma_signed(3.0)
        assert r.sign == 1
        assert abs(r.value - 0.5) <= 1e-15

    @pytest.mark.parametrize("x", [0.0, -1.0, -2.0, -7.0])
    def test_poles_are_exact_zero(self, x):
        r = sf.recip_gamma_signed(x)
        assert r.sign == 0 and r.value == 0.0

    def test_negative_half(self):
        # mpmath: 1/Gamma(-0.5)
        assert abs(sf.recip_gamma_signed(-0.5).value - (-0.28209479177387814)) <= 1e-15

    def test_reflection_consistency(self):
        for x in np.linspace(-4.95, -0.05, 99):
            if abs(x - round(x)) < 1e-9:
                continue
            r = sf.recip_gamma_signed(x).value
            # Gamma(x) Gamma(1-x) = pi / sin(pi x)
            prod = r * math.pi / (math.gamma(1.0 - x) * math.sin(math.pi * x))
            assert abs(prod - 1.0) <= 1e-10

    def test_signed_log_invariants(self):
        with pytest.raises(DomainError):
            sf.SignedLog(0.0, 0)
        assert sf.SignedLog.from_float(-2.0).value == -2.0
        assert sf.SignedLog.from_float(0.0).sign == 0


class TestPolygamma:
    def test_values(self):
        assert abs(sf.digamma(1.0) + EULER) <= 1e-12
        assert abs(sf.trigamma(1.0) - math.pi ** 2 / 6.0) <= 1e-12
        assert abs(sf.digamma(2.0) - (1.0 - EULER)) <= 1e-12

    @given(st.floats(min_value=1e-3, max_value=1e4))
    def test_recurrences(self, x):
        assert abs(sf.digamma(x + 1.0) - sf.digamma(x) - 1.0 / x) <= 1e-11 * max(1.0, 1.0 / x)
        assert abs(sf.trigamma(x + 1.0) - sf.trigamma(x) + 1.0 / x ** 2) <= \
            1e-11 * max(1.0, 1.0 / x ** 2)

    def test_against_mpmath(self):
        for x in np.geomspace(1e-3, 1e5, 60):
            assert abs(sf.digamma(x) - float(mpmath.digamma(x))) <= 1e-12 * max(1, abs(
                float(mpmath.digamma(x))))
            ref = float(mpmath.polygamma(1, x))
            assert abs(sf.trigamma(x) - ref) <= 1e-12 * max(1.0, ref)

    @pytest.mark.parametrize("fn", [sf.digamma, sf.trigamma])
    def test_domain(self, fn):
        with pytest.raises(DomainError):
            fn(0.0)


class TestRegIncBeta:
    def test_uniform(self):
        assert abs(sf.reg_inc_beta(0.5, 1.0, 1.0) - 0.5) <= 1e-15

    @pytest.mark.parametrize("b", [0.3, 1.0, 2.5, 40.0])
    @pytest.mark.parametrize("y", [0.01, 0.3, 0.77, 0.999])
    def test_a_equal_one(self, y, b):
        expected = -math.expm1(b * math.log1p(-y))
        assert abs(sf.reg_inc_beta(y, 1.0, b) - expected) <= 1e-12 * expected

    def test_quadrature_value(self):
        # mpmath quadrature of w**0.5 (1-w)**1.5 on (0, 0.3), divided by B(1.5, 2.5)
        assert abs(sf.reg_inc_beta(0.3, 1.5, 2.5) - 0.41568785229802533) <= 1e-12 * 0.42

    def test_boundaries_and_domain(self):
        assert sf.reg_inc_beta(0.0, 2.0, 3.0) == 0.0
        assert sf.reg_inc_beta(1.0, 2.0, 3.0) == 1.0
        with pytest.raises(DomainError):
            sf.reg_inc_beta(1.5, 2.0, 3.0)

    def test_against_mpmath_wide(self):
        for a, b in [(0.4108, 125.19), (0.2, 0.3), (5.0, 250.0), (30.0, 2.0), (1.5, 2.5)]:
            for y in (1e-4, 0.05, 0.5, 0.95, 0.9999):
                ref = float(mpmath.betainc(a, b, 0, y, regularized=True))
                got = sf.reg_inc_beta(y, a, b)
                assert abs(got - ref) <= 1e-12 * max(ref, 1e-300) + 1e-300

    @settings(max_examples=200)
    @given(st.floats(0.001, 0.999), st.floats(0.05, 200.0), st.floats(0.05, 200.0))
    def test_symmetry(self, y, a, b):
        assert abs(sf.reg_inc_beta(y, a, b) + sf.reg_inc_beta(1.0 - y, b, a) - 1.0) <= 1e-12


class TestInvRegIncBeta:
    def test_boundaries(self):
        assert sf.inv_reg_inc_beta(0.0, 2.0, 3.0) == 0.0
        assert sf.inv_reg_inc_beta(1.0, 2.0, 3.0) == 1.0
        assert abs(sf.inv_reg_inc_beta(0.5, 1.0, 1.0) - 0.5) <= 1e-15

    def test_root(self):
        # mpmath root of I_y(2, 3) = 0.25
        y = sf.inv_reg_inc_beta(0.25, 2.0, 3.0)
        assert abs(y - 0.2430220837560763) <= 1e-12
        assert abs(sf.reg_inc_beta(y, 2.0, 3.0) - 0.25) <= 1e-12

    @settings(max_examples=200)
    @given(st.floats(0.01, 0.99), st.floats(0.1, 50.0), st.floats(0.1, 50.0))
    def test_round_trip(self, y, a, b):
        p = sf.reg_inc_beta(y, a, b)
        back = sf.inv_reg_inc_beta(p, a, b)
        assert abs(sf.reg_inc_beta(back, a, b) - p) <= 1e-12
        # one ulp of p moves y by about eps / density; test y where that is small
        dens = math.exp((a - 1) * math.log(y) + (b - 1) * math.log1p(-y) - sf.ln_beta(a, b))
        if dens >= 1e-6:
            assert abs(back - y) <= 1e-9

    def test_monotone(self):
        ps = np.linspace(0.001, 0.999, 200)
        ys = [sf.inv_reg_inc_beta(p, 0.4, 125.0) for p in ps]
        assert np.all(np.diff(ys) > 0)


class TestGauss2F1:
    def test_zero_argument(self):
        assert sf.gauss_2f1(2.3, -1.7, 0.9, 0.0) == 1.0

    def test_log_identity(self):
        assert abs(sf.gauss_2f1(1.0, 1.0, 2.0, 0.5) - 2.0 * math.log(2.0)) <= 1e-13

    def test_terminating_negative_beta(self):
        # mpmath hyp2f1(1, -1.5, 2, 0.4)
        assert abs(sf.gauss_2f1(1.0, -1.5, 2.0, 0.4) - 0.7211451990730660) <= 1e-13

    def test_nonconvergence(self):
        with pytest.raises(ConvergenceError):
            sf.gauss_2f1(1.0, 1.0, 2.0, 0.999999, max_terms=100)

    def test_domain(self):
        with pytest.raises(DomainError):
            sf.gauss_2f1(1.0, 1.0, 2.0, 1.0)


class TestChi2:
    def test_zero(self):
        assert sf.chi2_sf(0.0, 3) == 1.0

    def test_reported_p_values(self):
        # agreement to two significant figures; exact tails are 7.8161e-14, 3.9343e-2
        for (w, k), target in [((60.36, 2), 7.81e-14), ((4.246, 1), 3.93e-2)]:
            unit = 10.0 ** (math.floor(math.log10(target)) - 1)
            assert abs(sf.chi2_sf(w, k) - target) <= 0.5 * unit

    def test_against_mpmath_deep_tail(self):
        for k in (1, 2, 3, 7):
            for w in (0.5, 5.0, 40.0, 70.0):
                ref = float(mpmath.gammainc(k / 2.0, w / 2.0, mpmath.inf, regularized=True))
                assert abs(sf.chi2_sf(w, k) - ref) <= 1e-10 * ref
                assert abs(sf.chi2_logsf(w, k) - math.log(ref)) <= 1e-10
