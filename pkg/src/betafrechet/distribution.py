"""Exact evaluation of the beta Frechet distribution.

With ``t = (sigma/x)**lam`` the Frechet parent has cdf ``G = exp(-t)``
and the BF(a, b, sigma, lam) cdf is the regularized incomplete beta
function evaluated at ``G``.  Everything here works with ``t`` on the
log scale so that ``1 - G = -expm1(-t)`` keeps full precision in both
tails and ``{1 - G}**(b - 1)`` never underflows before the logarithm
is taken.

All evaluation functions accept a scalar or an array ``x`` and return
the same shape (a Python float for scalar input).
"""

import math
from dataclasses import astuple, dataclass

import numpy as np

from . import _validation as v
from ._backend import kernels as _k
from .errors import DomainError, HazardOverflowError

__all__ = [
    "BFParams",
    "FrechetParams",
    "frechet_cdf",
    "frechet_pdf",
    "frechet_logpdf",
    "bf_logpdf",
    "bf_pdf",
    "bf_cdf",
    "bf_sf",
    "bf_hazard",
    "bf_quantile",
    "bf_sample",
    "BFSampler",
    "submodel_of",
    "inverse_gamma_params",
]

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class FrechetParams:
    """Frechet scale ``sigma`` and shape ``lam`` (both > 0)."""

    sigma: float
    lam: float

    def __post_init__(self):
        object.__setattr__(self, "sigma", v.positive("sigma", self.sigma))
        object.__setattr__(self, "lam", v.positive("lambda", self.lam))

    def as_bf(self):
        """The same law written as BF(1, 1, sigma, lam)."""
        return BFParams(1.0, 1.0, self.sigma, self.lam)


@dataclass(frozen=True)
class BFParams:
    """Parameter vector (a, b, sigma, lam) of the BF distribution.

    ``a`` and ``b`` are the beta shapes, ``sigma`` the Frechet scale and
    ``lam`` the Frechet shape.  All four must be finite and > 0.
    """

    a: float
    b: float
    sigma: float
    lam: float

    def __post_init__(self):
        for name, label in (("a", "a"), ("b", "b"), ("sigma", "sigma"), ("lam", "lambda")):
            object.__setattr__(self, name, v.positive(label, getattr(self, name)))

    def as_array(self):
        return np.array(astuple(self))

    @classmethod
    def from_array(cls, values):
        a, b, sigma, lam = (float(z) for z in values)
        return cls(a, b, sigma, lam)

    @property
    def frechet(self):
        return FrechetParams(self.sigma, self.lam)

    def replace(self, **changes):
        d = {"a": self.a, "b": self.b, "sigma": self.sigma, "lam": self.lam}
        d.update(changes)
        return BFParams(**d)


def _as_params(theta):
    if isinstance(theta, BFParams):
        return theta
    if isinstance(theta, FrechetParams):
        return theta.as_bf()
    return BFParams.from_array(theta)


def _points(x):
    arr = np.asarray(x, dtype=float)
    if arr.size and not (np.all(arr > 0.0) and not np.any(np.isnan(arr))):
        raise DomainError("x must be > 0")
    return arr


def _shape_out(values, x):
    if np.ndim(x) == 0:
        return float(values)
    return values


def _log_t(sigma, lam, x):
    return lam * (math.log(sigma) - np.log(x))


def _log1mexp_logt(logt):
    """log(1 - exp(-t)) given log t, accurate for t underflowing to 0."""
    logt = np.asarray(logt, dtype=float)
    t = np.exp(logt)
    with np.errstate(divide="ignore", invalid="ignore"):
        big = np.log1p(-np.exp(-np.maximum(t, _LN2)))
        mid = np.log(-np.expm1(-np.minimum(t, _LN2)))
        tiny = logt - 0.5 * t
    return np.where(t > _LN2, big, np.where(t < 1e-8, tiny, mid))


def frechet_cdf(p, x):
    """Frechet cdf ``exp(-(sigma/x)**lam)``."""
    p = p if isinstance(p, FrechetParams) else FrechetParams(*p)
    xa = _points(x)
    with np.errstate(over="ignore"):
        out = np.exp(-np.exp(_log_t(p.sigma, p.lam, xa)))
    return _shape_out(out, x)


def frechet_logpdf(p, x):
    p = p if isinstance(p, FrechetParams) else FrechetParams(*p)
    xa = _points(x)
    logt = _log_t(p.sigma, p.lam, xa)
    with np.errstate(over="ignore"):
        out = math.log(p.lam) + logt - np.log(xa) - np.exp(logt)
    return _shape_out(out, x)


def frechet_pdf(p, x):
    """Frechet density ``lam sigma**lam x**(-lam-1) exp(-(sigma/x)**lam)``."""
    out = np.exp(frechet_logpdf(p, x))
    return _shape_out(out, x)


def bf_logpdf(theta, x):
    """Log-density of BF(a, b, sigma, lam), evaluated in log space."""
    th = _as_params(theta)
    xa = _points(x)
    logt = _log_t(th.sigma, th.lam, xa)
    with np.errstate(over="ignore", invalid="ignore"):
        t = np.exp(logt)
        out = math.log(th.lam) - _k.ln_beta(th.a, th.b) + logt - np.log(xa) - th.a * t
        if th.b != 1.0:
            out = out + (th.b - 1.0) * _log1mexp_logt(logt)
    out = np.where(np.isposinf(t), -np.inf, out)
    return _shape_out(out, x)


def bf_pdf(theta, x):
    """Density of BF(a, b, sigma, lam)."""
    return _shape_out(np.exp(bf_logpdf(theta, x)), x)


def _g_and_complement(th, xa):
    with np.errstate(over="ignore"):
        t = np.exp(_log_t(th.sigma, th.lam, xa))
        g = np.exp(-t)
        gm = -np.expm1(-t)
    return g, gm


def bf_cdf(theta, x):
    """Cdf ``I_G(a, b)`` with ``G = exp(-(sigma/x)**lam)``."""
    th = _as_params(theta)
    xa = _points(x)
    g, gm = _g_and_complement(th, xa)
    out = _k.inc_beta_vec(np.atleast_1d(g), np.atleast_1d(gm), th.a, th.b).reshape(xa.shape)
    return _shape_out(out, x)


def bf_sf(theta, x):
    """Survival function ``I_{1-G}(b, a)``, accurate in the upper tail."""
    th = _as_params(theta)
    xa = _points(x)
    g, gm = _g_and_complement(th, xa)
    out = _k.inc_beta_vec(np.atleast_1d(gm), np.atleast_1d(g), th.b, th.a).reshape(xa.shape)
    return _shape_out(out, x)


def bf_hazard(theta, x):
    """Hazard rate ``f(x) / (1 - F(x))``.

    Raises
    ------
    HazardOverflowError
        Where the survival function is numerically zero, so that the
        ratio cannot be formed.
    """
    th = _as_params(theta)
    xa = _points(x)
    sf = np.asarray(bf_sf(th, xa))
    if np.any(sf <= 0.0):
        raise HazardOverflowError("survival function is numerically 0; hazard not representable")
    with np.errstate(over="ignore"):
        out = np.exp(np.asarray(bf_logpdf(th, xa)) - np.log(sf))
    if not np.all(np.isfinite(out)):
        raise HazardOverflowError("hazard overflows double precision")
    return _shape_out(out, x)


def _neg_log_beta_quantile(p, a, b):
    """-log Q with I_Q(a, b) = p, vectorized, precise for Q near 0 and 1."""
    p = np.atleast_1d(np.asarray(p, dtype=float))
    q = _k.inv_inc_beta_vec(p, a, b)
    out = np.empty_like(q)
    upper = q > 0.5
    if np.any(upper):
        w = _k.inv_inc_beta_vec(1.0 - p[upper], b, a)
        out[upper] = -np.log1p(-w)
    lower = ~upper
    with np.errstate(divide="ignore"):
        out[lower] = -np.log(q[lower])
    under = lower & (q == 0.0)
    if np.any(under):
        # leading term of I_y(a, b) ~ y**a / (a B(a, b)) as y -> 0
        out[under] = -(np.log(p[under]) + math.log(a) + _k.ln_beta(a, b)) / a
    return out


def bf_quantile(theta, p):
    """Quantile function ``sigma * (-log Q)**(-1/lam)``, ``Q = I^{-1}(p; a, b)``."""
    th = _as_params(theta)
    pa = np.asarray(p, dtype=float)
    if pa.size and not (np.all(pa > 0.0) and np.all(pa < 1.0)):
        raise DomainError("p must lie strictly inside (0, 1)")
    neglog = _neg_log_beta_quantile(pa, th.a, th.b).reshape(pa.shape)
    out = th.sigma * np.exp(-np.log(neglog) / th.lam)
    return _shape_out(out, p)


class BFSampler:
    """Reproducible BF variate stream.

    Uniforms come from numpy's ``Generator(Philox(seed))``; each uniform
    ``U`` is mapped to ``V = I^{-1}(U; a, b)`` and then to
    ``sigma / (-log V)**(1/lam)``.  An instance owns its generator and is
    meant for a single consumer; build one per thread.
    """

    def __init__(self, theta, seed):
        self.theta = _as_params(theta)
        self.seed = int(seed)
        self._rng = np.random.Generator(np.random.Philox(self.seed))

    def draw(self, n):
        n = v.positive_int("n", n)
        u = self._rng.random(n)
        # random() can return exactly 0.0; nudge it into the open interval
        u = np.where(u > 0.0, u, np.nextafter(0.0, 1.0))
        neglog = _neg_log_beta_quantile(u, self.theta.a, self.theta.b)
        return self.theta.sigma * np.exp(-np.log(neglog) / self.theta.lam)


def bf_sample(theta, n, seed):
    """Draw ``n`` BF variates; identical output for identical ``seed``."""
    return BFSampler(theta, seed).draw(n)


def submodel_of(theta):
    """Name of the smallest nested family containing ``theta``."""
    th = _as_params(theta)
    if th.a == 1.0 and th.b == 1.0:
        return "Frechet"
    if th.a == 1.0:
        return "EF"
    return "BF"


def inverse_gamma_params(theta):
    """(shape, scale) of the inverse gamma law equal to BF(a, 1, sigma, 1).

    With ``b = 1`` and ``lam = 1`` the density reduces to
    ``a sigma x**-2 exp(-a sigma / x)``, an inverse gamma law with
    shape 1 and scale ``a * sigma``.
    """
    th = _as_params(theta)
    if th.b != 1.0 or th.lam != 1.0:
        raise DomainError("inverse gamma reduction requires b = 1 and lambda = 1")
    return 1.0, th.a * th.sigma
