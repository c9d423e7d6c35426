"""Raw moments, shape measures, order-statistic moments and L-moments."""

import math

import numpy as np
import pytest

import betafrechet as bf
from betafrechet import moments as m
from betafrechet.errors import ConvergenceError, MomentExistenceError
from betafrechet.inference import expected_inverse_power
from betafrechet.specfun import digamma

from conftest import grid_thetas
from mc_oracle import mc_lmoments


class TestRawMoment:
    @pytest.mark.parametrize("r", [0.5, 1.0, 2.0, 3.0])
    def test_frechet(self, r):
        assert abs(m.raw_moment((1, 1, 2.0, 5.0), r) - 2.0 ** r * math.gamma(1 - r / 5)) \
            <= 1e-13 * 2.0 ** r

    @pytest.mark.parametrize("r", [0.5, 1.0, 2.0, 3.0])
    def test_two_term_reduction(self, r):
        ref = 1.5 ** r * math.gamma(1 - r / 5) * (2 - 2 ** (r / 5))
        assert abs(m.raw_moment((1, 2, 1.5, 5.0), r) - ref) <= 1e-13 * ref
        assert abs(m.raw_moment_quadrature((1, 2, 1.5, 5.0), r) - ref) <= 1e-10 * ref

    def test_quadrature_value(self, theta_ref):
        # mpmath integral of x f(x)
        ref = 1.0164327293648671
        assert abs(m.raw_moment(theta_ref, 1) - ref) <= 1e-8 * ref

    def test_request_record(self, theta_ref):
        req = m.MomentRequest(2.0, theta_ref)
        assert m.raw_moment(req) == m.raw_moment(theta_ref, 2.0)

    def test_series_against_quadrature_grid(self):
        for th in grid_thetas():
            for r in (0.5, 1.0, 2.0, 3.0):
                if r >= th.lam or r >= th.lam * th.b:
                    continue
                ser = m.raw_moment(th, r)
                quad = m.raw_moment_quadrature(th, r)
                assert abs(ser - quad) <= 1e-8 * abs(quad), (th, r)

    @pytest.mark.parametrize("r", [0.5, 1.0, 2.0, 3.0])
    def test_existence_gate(self, r):
        for lam in (0.5, 1.0, 2.0, 3.0, 5.0):
            th = bf.BFParams(1.5, 2.5, 1.0, lam)
            if r >= lam:
                with pytest.raises(MomentExistenceError):
                    m.raw_moment(th, r)
            else:
                assert math.isfinite(m.raw_moment(th, r))

    def test_existence_needs_lam_b(self):
        # lam > r but lam b <= r: the tail is too heavy
        with pytest.raises(MomentExistenceError):
            m.raw_moment((1.5, 0.3, 1.0, 5.0), 2.0)
        with pytest.raises(MomentExistenceError):
            m.raw_moment_quadrature((1.5, 0.3, 1.0, 5.0), 2.0)

    def test_scale_equivariance(self, theta_ref):
        for r in (0.5, 1.0, 2.0, 3.0):
            one = m.raw_moment(theta_ref, r)
            two = m.raw_moment(theta_ref.replace(sigma=2.0), r)
            assert abs(two - 2.0 ** r * one) <= 1e-12 * two

    def test_non_integer_order(self, theta_ref):
        assert abs(m.raw_moment(theta_ref, 1.7) - m.raw_moment_quadrature(theta_ref, 1.7)) \
            <= 1e-9


class TestInversePower:
    def test_identity_grid(self):
        for th in grid_thetas(sigmas=(0.5, 2.0), lams=(1.0, 5.0)):
            ref = digamma(th.a + th.b) - digamma(th.a)
            quad = th.sigma ** th.lam * m.raw_moment_quadrature(th, -th.lam)
            assert abs(quad - ref) <= 1e-9 * max(1.0, ref), th
            assert abs(th.sigma ** th.lam * expected_inverse_power(th) - ref) <= 1e-12 * max(1, ref)


class TestShape:
    def test_frechet_summary(self):
        s = m.frechet_cumulant_summary(bf.FrechetParams(1.0, 5.0))
        assert abs(s.mean - math.gamma(0.8)) <= 1e-14
        s2 = m.frechet_cumulant_summary(bf.FrechetParams(2.0, 5.0))
        # Gamma-table value of 4 (Gamma(0.6) - Gamma(0.8)**2)
        assert abs(s2.variance - 0.5350456899676617) <= 1e-13
        assert abs(s2.skewness - s.skewness) <= 1e-12
        assert abs(s2.kurtosis - s.kurtosis) <= 1e-12

    @pytest.mark.parametrize("lam", [4.0, 3.0, 1.0])
    def test_frechet_needs_lam_above_four(self, lam):
        with pytest.raises(MomentExistenceError):
            m.frechet_cumulant_summary(bf.FrechetParams(1.0, lam))

    def test_bf_reduces_to_frechet(self):
        s = m.frechet_cumulant_summary(bf.FrechetParams(1.0, 5.0))
        shape = m.bf_skewness_kurtosis((1, 1, 1, 5))
        assert abs(shape.skewness - s.skewness) <= 1e-10
        assert abs(shape.kurtosis - s.kurtosis) <= 1e-9

    def test_scale_free(self):
        one = m.bf_skewness_kurtosis((2, 3, 1, 5))
        seven = m.bf_skewness_kurtosis((2, 3, 7, 5))
        assert one == seven

    def test_against_quadrature(self):
        # mpmath central moments of BF(2, 3, 1, 5)
        shape = m.bf_skewness_kurtosis((2, 3, 1, 5))
        assert abs(shape.skewness - 1.0912029184992688) <= 1e-7
        assert abs(shape.kurtosis - 5.553004637098887) <= 1e-7
        quad = m.skewness_kurtosis_quadrature((2, 3, 1, 5))
        assert abs(quad.skewness - shape.skewness) <= 1e-7

    def test_kurtosis_existence(self):
        with pytest.raises(MomentExistenceError):
            m.bf_skewness_kurtosis((2, 3, 1, 4))

    def test_skewness_alone(self):
        assert abs(m.bf_skewness((2, 3, 1, 5)) - 1.0912029184992688) <= 1e-7
        with pytest.raises(MomentExistenceError):
            m.bf_skewness((2, 3, 1, 3))


class TestOrderStatMoments:
    def test_single(self, theta_ref):
        assert abs(m.order_stat_moment(theta_ref, 1, 1, 1.0) - m.raw_moment(theta_ref, 1.0)) \
            <= 1e-13

    def test_maximum_of_two(self):
        # mpmath integral of x 2 F f for BF(1, 2, 1, 5)
        assert abs(m.order_stat_moment((1, 2, 1, 5), 2, 2, 1.0) - 1.0843374443677920) <= 1e-7

    def test_non_integer_b(self, theta_ref):
        # mpmath integral of the minimum of three
        assert abs(m.order_stat_moment(theta_ref, 1, 3, 1.0) - 0.8990802945453345) <= 1e-5

    def test_against_quadrature(self, theta_ref):
        for n in range(1, 5):
            for i in range(1, n + 1):
                ser = m.order_stat_moment(theta_ref, i, n, 1.0)
                quad = m.order_stat_moment_quadrature(theta_ref, i, n, 1.0)
                assert abs(ser - quad) <= 1e-8 * quad

    def test_existence(self, theta_ref):
        with pytest.raises(MomentExistenceError):
            m.order_stat_moment(theta_ref, 1, 2, 5.0)


class TestLMoments:
    def test_first_is_mean(self, theta_ref):
        assert abs(m.l_moments(theta_ref, 1)[0] - m.raw_moment(theta_ref, 1.0)) <= 1e-12

    def test_frechet_closed_form(self):
        lm = m.l_moments((1, 1, 1, 5), 2)
        assert abs(lm[1] - math.gamma(0.8) * (2 ** 0.2 - 1)) <= 1e-12

    def test_frechet_monte_carlo(self):
        est, se, _, _ = mc_lmoments((1.0, 1.0, 1.0, 5.0))
        lm = m.l_moments((1, 1, 1, 5), 4)
        assert np.all(np.abs(np.array(lm) - est) <= 3 * se)

    def test_reference_monte_carlo(self, theta_ref):
        est, se, rat, rat_se = mc_lmoments((1.5, 2.5, 1.0, 5.0))
        lm = m.l_moments(theta_ref, 4)
        assert np.all(np.abs(np.array(lm) - est) <= 3 * se)
        tau3, tau4 = m.l_moment_ratios(theta_ref)
        assert abs(tau3 - rat[0]) <= 3 * rat_se[0]
        assert abs(tau4 - rat[1]) <= 3 * rat_se[1]

    def test_series_and_quadrature_against_mpmath(self, theta_ref):
        # mpmath l2, l3, l4 from 30-digit quadrature of the order-statistic densities
        ref = np.array([0.08294685814491132, 0.014135704795668713, 0.012913429664188538])
        quad = m.l_moments(theta_ref, 4, method="quadrature")
        assert np.allclose(quad[1:], ref, rtol=0.0, atol=1e-11)
        # each expected order statistic carries an extrapolated tail good to about 1e-9
        ser = m.l_moments(theta_ref, 4, method="series")
        assert np.allclose(ser[1:], ref, rtol=0.0, atol=3e-9)

    def test_small_b_uses_quadrature(self):
        th = bf.BFParams(1.5, 0.5, 1.0, 5.0)
        with pytest.raises(ConvergenceError):
            m.l_moments(th, 2, method="series")
        auto = m.l_moments(th, 4)
        assert np.allclose(auto, m.l_moments(th, 4, method="quadrature"), rtol=1e-12)

    def test_l2_positive(self):
        for a in (0.5, 1.5, 5.0):
            for b in (0.5, 1.0, 2.5, 5.0):
                lm = m.l_moments((a, b, 1.0, 5.0), 2)
                assert lm[1] > 0

    def test_existence(self):
        with pytest.raises(MomentExistenceError):
            m.l_moments((1.5, 2.5, 1.0, 1.0))
        with pytest.raises(MomentExistenceError):
            m.l_moments((1.5, 0.3, 1.0, 3.0))
