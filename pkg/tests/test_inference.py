"""Likelihood, score, T integrals, information, fitting and LR tests."""

import math

import numpy as np
import pytest

import betafrechet as bf
from betafrechet import inference as inf
from betafrechet.errors import (ConvergenceError, DataError, DivergenceError, DomainError,
                                SingularMatrixError)
from betafrechet.specfun import trigamma

CARBON = np.array(bf.builtin_dataset("carbon_fibres").values)
GLASS = np.array(bf.builtin_dataset("glass_fibres").values)

# (i, j, k, l) -> value at (a, b) = (1.5, 2.5)
T_TABLE = {
    (1, 1, 2, 0): 0.51230070, (1, 1, 1, 0): 0.55296103, (0, 0, 1, 2): 0.62931802,
    (1, 2, 2, 2): 0.43145336, (1, 1, 1, 2): 0.32124774, (0, 0, 1, 1): 0.48641180,
    (1, 1, 1, 1): -0.16152763, (1, 2, 2, 0): 0.86196008,
}
# the same eight from 30-digit mpmath quadrature
T_MPMATH = {
    (1, 1, 2, 0): 0.5123006986, (1, 1, 1, 0): 0.5529610278, (0, 0, 1, 2): 0.6293180197,
    (1, 2, 2, 2): 0.4314533610, (1, 1, 1, 2): 0.3212477417, (0, 0, 1, 1): 0.4864118035,
    (1, 1, 1, 1): -0.1615276312, (1, 2, 2, 0): 0.8619600805,
}


def log_scale_fd(theta, x, h=1e-5):
    z = np.log(theta.as_array())
    out = np.empty(4)
    for p in range(4):
        up, dn = z.copy(), z.copy()
        up[p] += h
        dn[p] -= h
        out[p] = (inf.loglik(np.exp(up), x) - inf.loglik(np.exp(dn), x)) / (2 * h)
    return out


class TestLoglik:
    def test_single_observation(self):
        assert abs(inf.loglik((1, 1, 1.0, 3.0), [1.0]) - (math.log(3.0) - 1.0)) <= 1e-14
        # the full log-density carries the Jacobian term -log y
        assert abs(inf.loglik((1, 1, 2.0, 3.0), [2.0])
                   - (math.log(3.0) - 1.0 - math.log(2.0))) <= 1e-14

    def test_reference_points(self):
        assert abs(inf.loglik((0.4108, 125.1891, 31.4556, 0.7496), CARBON) + 142.9640) <= 1e-3
        assert abs(inf.loglik((1, 1, 1.8916, 1.7690), CARBON) + 173.1440) <= 1e-3

    def test_matches_density(self, theta_ref):
        x = bf.bf_sample(theta_ref, 30, 1)
        assert abs(inf.loglik(theta_ref, x) - np.sum(bf.bf_logpdf(theta_ref, x))) <= 1e-11

    @pytest.mark.parametrize("bad", [[1.0, 0.0], [1.0, -2.0], [1.0, math.nan], []])
    def test_bad_data(self, bad):
        with pytest.raises(DataError):
            inf.loglik((1, 1, 1, 1), bad)


class TestScore:
    def test_finite_differences_reference(self, theta_ref):
        x = bf.bf_sample(theta_ref, 50, 2)
        ana = inf.score(theta_ref, x) * theta_ref.as_array()
        fd = log_scale_fd(theta_ref, x)
        assert np.all(np.abs(ana - fd) <= 1e-6 * np.maximum(1.0, np.abs(ana)))

    def test_finite_differences_random(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            th = bf.BFParams(*np.exp(rng.uniform(np.log(0.3), np.log(6.0), 4)))
            x = bf.bf_sample(th, 50, int(rng.integers(1 << 30)))
            ana = inf.score(th, x) * th.as_array()
            fd = log_scale_fd(th, x)
            assert np.all(np.abs(ana - fd) <= 1e-6 * np.maximum(1.0, np.abs(ana))), th

    def test_per_observation_terms_sum(self, theta_ref):
        x = bf.bf_sample(theta_ref, 40, 4)
        assert np.allclose(inf.score_terms(theta_ref, x).sum(axis=1), inf.score(theta_ref, x),
                           rtol=1e-12, atol=1e-12)

    def test_expected_score_zero(self, theta_ref):
        # E[(sigma/X)**lam] = psi(a+b) - psi(a), i.e. the a-score has mean zero
        x = bf.bf_sample(theta_ref, 400_000, 9)
        sc = inf.score_terms(theta_ref, x)
        se = sc.std(axis=1, ddof=1) / math.sqrt(x.size)
        assert np.all(np.abs(sc.mean(axis=1)) <= 4 * se)


class TestTIntegrals:
    @pytest.mark.parametrize("idx", sorted(T_TABLE))
    def test_table(self, idx):
        val = inf.t_integral(inf.TSpec(*idx, 1.5, 2.5))
        assert abs(val - T_TABLE[idx]) <= 1e-6
        assert abs(val - T_MPMATH[idx]) <= 1e-9

    @pytest.mark.parametrize("ab", [(1.5, 2.5), (0.3, 0.7), (4.0, 1e3)])
    def test_total_probability(self, ab):
        assert abs(inf.t_integral(inf.TSpec(0, 0, 0, 0, *ab)) - 1.0) <= 1e-12

    def test_finiteness_rule(self):
        assert inf.TSpec(1, 2, 2, 0, 1.5, 0.5).finite  # b - j + k = 0.5
        assert not inf.TSpec(1, 2, 0, 0, 1.5, 1.5).finite
        assert not inf.TSpec(1, 2, 1, 0, 1.5, 1.0).finite
        with pytest.raises(DivergenceError):
            inf.t_integral(inf.TSpec(1, 2, 0, 0, 1.5, 1.5))

    def test_beyond_b_greater_than_j(self):
        # b < j but b - j + k > 0: the (-log V)**k factor tames (1 - V)**-j
        val = inf.t_integral(inf.TSpec(1, 2, 2, 0, 1.5, 0.8))
        assert math.isfinite(val) and val > 0

    def test_invalid_indices(self):
        with pytest.raises(DomainError):
            inf.TSpec(-1, 0, 0, 0, 1.0, 1.0)


class TestInformation:
    def test_t_free_elements_frechet(self):
        k = inf.info_matrix_analytic((1, 1, 1, 1))
        assert abs(k.element("a", "a") - 1.0) <= 1e-12
        assert abs(k.element("a", "b") - (1.0 - math.pi ** 2 / 6)) <= 1e-12

    def test_kaa_free_of_scale_and_shape(self):
        ref = trigamma(1.5) - trigamma(4.0)
        for s, l in [(1.0, 5.0), (3.0, 0.7), (0.2, 2.0)]:
            k = inf.info_matrix_analytic((1.5, 2.5, s, l))
            assert abs(k.element("a", "a") - ref) <= 1e-14

    @pytest.mark.parametrize("th", [(1.5, 2.5, 1.0, 5.0), (2.0, 3.0, 1.0, 2.0)])
    def test_corrected_matches_numeric(self, th):
        cmp = inf.compare_information(th, "corrected")
        assert cmp["violations"] == []
        assert cmp["authoritative"].source == "analytic"
        ana, num = cmp["analytic"].matrix, cmp["numeric"].matrix
        assert np.all(np.abs(ana - num) <= 1e-4 * (1.0 + np.abs(num)))
        # the T-free closed forms agree much more tightly
        for p, q in [(0, 0), (0, 1), (1, 1)]:
            assert abs(ana[p, q] - num[p, q]) <= 1e-8

    @pytest.mark.parametrize("th", [(1.5, 2.5, 1.0, 5.0), (2.0, 3.0, 1.0, 2.0)])
    def test_uncorrected_flags_two_elements(self, th):
        cmp = inf.compare_information(th, "uncorrected")
        assert sorted((p, q) for p, q, _, _ in cmp["violations"]) == [("sigma", "lam"),
                                                                      ("sigma", "sigma")]
        assert cmp["authoritative"].source == "numeric"

    def test_positive_definite(self, theta_ref):
        assert inf.info_matrix_numeric(theta_ref).is_positive_definite()
        assert inf.info_matrix_analytic(theta_ref).is_positive_definite()

    def test_observed_information_approaches_expected(self, theta_ref):
        x = bf.bf_sample(theta_ref, 100_000, 21)
        obs = inf.observed_info(theta_ref, x).matrix
        exp = inf.info_matrix_analytic(theta_ref).matrix
        assert np.all(np.abs(obs - exp) <= 0.05 * (1.0 + np.abs(exp)))

    def test_symmetry_enforced(self):
        with pytest.raises(DomainError):
            inf.InfoMatrix(np.array([[1.0, 2.0], [0.0, 1.0]]), "numeric")

    def test_singular_covariance(self):
        k = inf.InfoMatrix(np.ones((4, 4)), "numeric")
        with pytest.raises(SingularMatrixError):
            k.covariance(10)

    @pytest.mark.parametrize("th", [(1.5, 0.5, 1.0, 2.0), (0.7, 0.8, 2.0, 3.0)])
    def test_small_b(self, th):
        # every T in the matrix has b - j + k > 0, so b < 1 is allowed
        cmp = inf.compare_information(th)
        assert cmp["violations"] == []


class TestFit:
    def test_frechet_carbon(self):
        f = inf.fit(CARBON, "Frechet")
        assert f.converged and f.model == "Frechet"
        assert f.loglik >= -173.1440 - 0.01
        assert f.theta.a == 1.0 and f.theta.b == 1.0
        assert abs(f.theta.sigma - 1.8916) <= 1e-3 and abs(f.theta.lam - 1.7690) <= 1e-3
        assert f.grad_norm <= 1e-4

    def test_nesting(self):
        fits = {m: inf.fit(GLASS, m) for m in ("BF", "EF", "Frechet")}
        assert fits["BF"].loglik >= fits["EF"].loglik - 1e-9
        assert fits["BF"].loglik >= fits["Frechet"].loglik - 1e-9
        assert fits["EF"].loglik >= fits["Frechet"].loglik - 1e-9

    def test_stationary_or_at_bound(self):
        f = inf.fit(CARBON, "BF")
        assert f.converged
        sc = inf.score(f.theta, CARBON) * f.theta.as_array()
        for p, name in enumerate(inf.PARAM_NAMES):
            if name in f.at_bound:
                assert sc[p] >= 0.0  # the likelihood still rises towards the bound
            else:
                assert abs(sc[p]) <= 1e-4

    def test_simulated_recovery(self, theta_ref):
        x = bf.bf_sample(theta_ref, 10_000, 1)
        f = inf.fit(x, "BF")
        assert f.converged and not f.at_bound
        z = (f.theta.as_array() - theta_ref.as_array()) / np.array(f.std_errors)
        assert np.all(np.abs(z) <= 4.0)

    def test_fixed_parameters(self, theta_ref):
        x = bf.bf_sample(theta_ref, 300, 2)
        f = inf.fit(x, "BF", fixed={"lam": 5.0})
        assert f.theta.lam == 5.0 and f.free == ("a", "b", "sigma")

    def test_deterministic(self):
        assert inf.fit(GLASS, "EF", seed=4).loglik == inf.fit(GLASS, "EF", seed=4).loglik

    def test_too_few_points(self):
        with pytest.raises(DataError):
            inf.fit([1.0, 2.0, 3.0], "BF")

    def test_unknown_model(self):
        with pytest.raises(DomainError):
            inf.fit(CARBON, "Weibull")

    def test_nonconvergence_reports_best(self, theta_ref):
        x = bf.bf_sample(theta_ref, 300, 5)
        with pytest.raises(ConvergenceError) as info:
            inf.fit(x, "BF", maxiter=2, restarts=0)
        assert isinstance(info.value.partial, inf.FitResult)


class TestConfidenceIntervals:
    def test_degenerate_level(self, theta_ref):
        f = inf.fit(bf.bf_sample(theta_ref, 2000, 6), "BF")
        for (lo, hi), val in zip(inf.confidence_intervals(f, 1.0), f.theta.as_array()):
            assert lo == hi == val

    def test_fixed_parameters_zero_width(self):
        f = inf.fit(CARBON, "Frechet")
        (alo, ahi), (blo, bhi) = inf.confidence_intervals(f, 0.05)[:2]
        assert alo == ahi == 1.0 and blo == bhi == 1.0

    def test_width_scales_with_root_n(self, theta_ref):
        w = []
        for n in (2500, 10_000):
            f = inf.fit(bf.bf_sample(theta_ref, n, 8), "BF")
            w.append(np.array([hi - lo for lo, hi in inf.confidence_intervals(f, 0.05)]))
        assert np.all(np.abs(w[1] / w[0] - 0.5) <= 0.05)

    @pytest.mark.slow
    def test_coverage(self, theta_ref):
        # 500 replications at n = 500; a replication without intervals counts as a miss
        reps, hits = 500, np.zeros(4)
        for seed in range(reps):
            x = bf.bf_sample(theta_ref, 500, 10_000 + seed)
            try:
                cis = inf.confidence_intervals(inf.fit(x, "BF"), 0.05)
            except (ConvergenceError, SingularMatrixError):
                continue
            hits += [lo <= t <= hi for (lo, hi), t in zip(cis, theta_ref.as_array())]
        se = math.sqrt(0.95 * 0.05 / reps)
        assert np.all(np.abs(hits / reps - 0.95) <= 3 * se), hits / reps

    @pytest.mark.parametrize("gamma", [0.0, 1.5])
    def test_level_domain(self, gamma):
        f = inf.fit(CARBON, "Frechet")
        with pytest.raises(DomainError):
            inf.confidence_intervals(f, gamma)


class TestLikelihoodRatio:
    def test_from_logliks(self):
        t = inf.lr_from_logliks(-100.0, -105.0, "Frechet")
        assert t.statistic == 10.0 and t.df == 2
        assert abs(t.p_value - math.exp(-5.0)) <= 1e-15
        assert inf.lr_from_logliks(-100.0, -101.0, "EF").df == 1

    def test_clamping_and_rejection(self):
        t = inf.lr_from_logliks(-100.0, -100.0 + 1e-10, "EF")
        assert t.statistic == 0.0 and t.p_value == 1.0
        with pytest.raises(ConvergenceError):
            inf.lr_from_logliks(-100.0, -99.0, "EF")

    def test_log_p_value(self):
        t = inf.lr_from_logliks(0.0, -400.0, "Frechet")
        assert abs(t.p_value / math.exp(-400.0) - 1.0) <= 1e-12
        # beyond double range only the log survives
        t = inf.lr_from_logliks(0.0, -1000.0, "Frechet")
        assert t.p_value == 0.0
        assert abs(t.log_p_value + 1000.0) <= 1e-9

    def test_carbon(self):
        t = inf.lr_test(CARBON, "Frechet")
        assert t.df == 2 and t.statistic > 0 and 0.0 <= t.p_value <= 1.0
        assert abs(t.statistic - 2 * (t.alt_loglik - t.null_loglik)) <= 1e-12
        assert t.null_model == "Frechet"

    def test_bf_null_rejected(self):
        with pytest.raises(DomainError):
            inf.lr_test(CARBON, "BF")
