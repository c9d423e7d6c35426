"""Compiled and pure-Python kernels agree; the selector honours the override."""

import os
import subprocess
import sys

import numpy as np
import pytest

from betafrechet import _kernels_py
from betafrechet._backend import compiled_kernels, load_kernels

compiled = compiled_kernels()
needs_compiled = pytest.mark.skipif(compiled is None, reason="extension not built")

RTOL = 1e-13


def _close(x, y, rtol=RTOL):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return np.allclose(x, y, rtol=rtol, atol=1e-300, equal_nan=True)


@needs_compiled
class TestEquivalence:
    def test_scalar_gamma_family(self):
        for x in np.geomspace(1e-6, 1e7, 200):
            for name in ("ln_gamma", "digamma", "trigamma", "tetragamma", "log1mexp"):
                assert _close(getattr(compiled, name)(x), getattr(_kernels_py, name)(x)), name

    def test_ln_beta_and_shift(self):
        for a, b in [(0.3, 0.7), (2.0, 3.0), (0.41, 1.25e5), (1.5, 1e6), (80.0, 2e7)]:
            assert _close(compiled.ln_beta(a, b), _kernels_py.ln_beta(a, b))
            assert _close(compiled.ln_gamma_shift(b, a), _kernels_py.ln_gamma_shift(b, a))

    def test_inc_beta_and_inverse(self, rng):
        y = rng.uniform(0.0, 1.0, 300)
        for a, b in [(0.5, 0.5), (1.5, 2.5), (0.41, 125.0), (30.0, 4.0)]:
            assert _close(compiled.inc_beta_vec(y, 1.0 - y, a, b),
                          _kernels_py.inc_beta_vec(y, 1.0 - y, a, b), 1e-12)
            p = rng.uniform(0.0, 1.0, 100)
            assert _close(compiled.inv_inc_beta_vec(p, a, b),
                          _kernels_py.inv_inc_beta_vec(p, a, b), 1e-12)

    def test_gamma_q(self):
        for s in (0.5, 1.0, 3.5):
            for x in (0.1, 2.0, 30.0, 200.0):
                assert _close(compiled.log_gamma_q(s, x), _kernels_py.log_gamma_q(s, x))

    def test_likelihood_kernels(self, rng):
        x = rng.uniform(0.3, 5.0, 500)
        for th in [(1.5, 2.5, 1.0, 5.0), (0.41, 125.2, 31.5, 0.75), (1.0, 1.0, 2.0, 1.8)]:
            assert _close(compiled.loglik_sum(*th, x), _kernels_py.loglik_sum(*th, x), 1e-12)
            assert _close(compiled.score_sum(*th, x), _kernels_py.score_sum(*th, x), 1e-10)

    def test_power_ladder(self):
        alpha = np.array([1.0, 0.5, -0.25, 0.125, 0.3])
        for m in (1.0, 3.0, -0.5, 2.5):
            assert _close(compiled.power_ladder(alpha, m), _kernels_py.power_ladder(alpha, m))


class TestSelection:
    def test_explicit_python(self):
        assert load_kernels(prefer_compiled=False) is _kernels_py

    @needs_compiled
    def test_explicit_compiled(self):
        assert load_kernels(prefer_compiled=True).BACKEND == "cython"

    def test_environment_override(self):
        env = dict(os.environ, BETAFRECHET_PURE_PYTHON="1")
        out = subprocess.run([sys.executable, "-c", "import betafrechet; print(betafrechet.BACKEND)"],
                             env=env, capture_output=True, text=True, check=True)
        assert out.stdout.strip() == "python"

    def test_pure_python_end_to_end(self):
        code = ("import betafrechet as bf;"
                "print(repr(bf.bf_cdf((1.5, 2.5, 1.0, 5.0), 1.2)))")
        env = dict(os.environ, BETAFRECHET_PURE_PYTHON="1")
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                             text=True, check=True)
        from betafrechet import bf_cdf
        assert abs(float(out.stdout) - bf_cdf((1.5, 2.5, 1.0, 5.0), 1.2)) <= 1e-13
