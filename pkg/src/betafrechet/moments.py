"""Moments, order-statistic moments and L-moments.

Series results come from the mixture representation; each has an
independent quadrature counterpart (suffix ``_quadrature``) computed in
the beta log-scale ``u = (sigma/X)**lam``, where ``X**r = sigma**r u**(-r/lam)``.

Existence: ``E X**r`` is finite iff ``r < lam * b``.  The series
formulas carry the factor ``Gamma(1 - r/lam)`` and are used only for
``r < lam``, so every series routine raises :class:`MomentExistenceError`
when ``r >= lam`` or ``r >= lam * b``.  The quadrature routines accept
any ``r < lam * b``.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _validation as v
from ._backend import kernels as _k
from ._quad import beta_expectation
from .distribution import BFParams, FrechetParams, _as_params
from .errors import ConvergenceError, MomentExistenceError
from .series import DEFAULT_OPTIONS, SeriesOptions, bf_series, order_stat_sum

__all__ = [
    "MomentRequest",
    "FrechetSummary",
    "ShapeMeasures",
    "raw_moment",
    "raw_moment_quadrature",
    "frechet_cumulant_summary",
    "bf_skewness_kurtosis",
    "bf_skewness",
    "skewness_kurtosis_quadrature",
    "order_stat_moment",
    "order_stat_moment_quadrature",
    "l_moments",
    "l_moment_ratios",
]

# relative rounding-error budget before a series result is refused
_SERIES_RTOL = 1e-9


@dataclass(frozen=True)
class MomentRequest:
    """Order ``r`` with parameters and series options; requires ``r < lam``."""

    r: float
    theta: BFParams
    opts: SeriesOptions = DEFAULT_OPTIONS

    def __post_init__(self):
        object.__setattr__(self, "theta", _as_params(self.theta))
        object.__setattr__(self, "r", v.positive("r", self.r))
        _check_series_order(self.theta, self.r)


@dataclass(frozen=True)
class FrechetSummary:
    mean: float
    variance: float
    skewness: float
    kurtosis: float


@dataclass(frozen=True)
class ShapeMeasures:
    """Standardized third and fourth central moments (kurtosis not in excess)."""

    skewness: float
    kurtosis: float


def _check_series_order(th, r):
    if r >= th.lam:
        raise MomentExistenceError(
            f"moment of order r={r} requires r < lambda={th.lam}")
    if r >= th.lam * th.b:
        raise MomentExistenceError(
            f"moment of order r={r} does not exist: needs r < lambda*b={th.lam * th.b}")


def _series_checked(sv, what):
    value = float(sv.value[0])
    err = float(sv.abs_error[0])
    if not math.isfinite(value) or err > _SERIES_RTOL * max(abs(value), 1e-300):
        raise ConvergenceError(
            f"{what}: series error estimate {err:.3g} exceeds tolerance "
            f"(cancellation); use the quadrature variant", partial=value)
    return value


def raw_moment(theta, r=None, opts=None):
    """Raw moment ``E X**r`` from the mixture series.

    ``sigma**r Gamma(1 - s) Gamma(a+b)/Gamma(a) sum_j (-1)**j (a+j)**(s-1) / (Gamma(b-j) j!)``
    with ``s = r/lam``.  Accepts either a :class:`MomentRequest` or
    ``(theta, r, opts)``.

    Raises
    ------
    MomentExistenceError
        If ``r >= lam`` or ``r >= lam * b``.
    ConvergenceError
        If the series error estimate (rounding in the alternating part,
        which grows with b) exceeds a relative 1e-9.
    """
    if isinstance(theta, MomentRequest):
        req = theta
    else:
        req = MomentRequest(r, theta, opts or DEFAULT_OPTIONS)
    th, r = req.theta, req.r
    s = r / th.lam
    log_pref = (r * math.log(th.sigma) + math.lgamma(1.0 - s)
                + _k.ln_gamma(th.a + th.b) - _k.ln_gamma(th.a))
    sv = bf_series(th.a, th.b, 0.0, s - 1.0, log_pref, req.opts)
    return _series_checked(sv, "raw_moment")


def raw_moment_quadrature(theta, r):
    """``E X**r`` by adaptive quadrature in the beta log-scale."""
    th = _as_params(theta)
    r = v.finite("r", r)
    if r >= th.lam * th.b:
        raise MomentExistenceError(f"E X^{r} diverges (needs r < lambda*b)")
    return th.sigma ** r * beta_expectation(None, th.a, th.b, alpha=-r / th.lam)


def _standardize(m1, m2, m3, m4):
    c2 = math.fsum([m2, -m1 * m1])
    c3 = math.fsum([m3, -3.0 * m1 * m2, 2.0 * m1 ** 3])
    c4 = math.fsum([m4, -4.0 * m1 * m3, 6.0 * m1 * m1 * m2, -3.0 * m1 ** 4])
    return c2, c3 / c2 ** 1.5, c4 / c2 ** 2


def frechet_cumulant_summary(p):
    """Mean, variance, skewness and kurtosis of the Frechet law.

    With ``g_k = Gamma(1 - k/lam)``: mean ``sigma g1``, variance
    ``sigma**2 (g2 - g1**2)``, and the standardized ratios
    ``(g3 - 3 g1 g2 + 2 g1**3) / (g2 - g1**2)**1.5`` and
    ``(g4 - 4 g1 g3 + 6 g1**2 g2 - 3 g1**4) / (g2 - g1**2)**2``.

    Raises
    ------
    MomentExistenceError
        If ``lam <= 4``.
    """
    p = p if isinstance(p, FrechetParams) else FrechetParams(*p)
    if p.lam <= 4.0:
        raise MomentExistenceError("kurtosis needs lambda > 4")
    g = [math.gamma(1.0 - k / p.lam) for k in range(1, 5)]
    var, skew, kurt = _standardize(*g)
    return FrechetSummary(p.sigma * g[0], p.sigma ** 2 * var, skew, kurt)


def bf_skewness_kurtosis(theta, opts=None):
    """Skewness and kurtosis from the series raw moments of orders 1-4.

    Computed at ``sigma = 1`` since both are scale free.

    Raises
    ------
    MomentExistenceError
        If ``lam <= 4`` or the fourth moment does not exist.
    """
    th = _as_params(theta)
    if th.lam <= 4.0:
        raise MomentExistenceError("kurtosis needs lambda > 4")
    unit = th.replace(sigma=1.0)
    m = [raw_moment(unit, r, opts) for r in (1, 2, 3, 4)]
    _, skew, kurt = _standardize(*m)
    return ShapeMeasures(skew, kurt)


def bf_skewness(theta, opts=None):
    """Skewness alone, which needs moments up to order 3 only.

    Raises
    ------
    MomentExistenceError
        If ``lam <= 3`` or ``lam * b <= 3``.
    """
    th = _as_params(theta)
    if th.lam <= 3.0:
        raise MomentExistenceError("skewness needs lambda > 3")
    unit = th.replace(sigma=1.0)
    m1, m2, m3 = (raw_moment(unit, r, opts) for r in (1, 2, 3))
    c2 = math.fsum([m2, -m1 * m1])
    c3 = math.fsum([m3, -3.0 * m1 * m2, 2.0 * m1 ** 3])
    return c3 / c2 ** 1.5


def skewness_kurtosis_quadrature(theta):
    th = _as_params(theta)
    if th.lam <= 4.0:
        raise MomentExistenceError("kurtosis needs lambda > 4")
    unit = th.replace(sigma=1.0)
    m = [raw_moment_quadrature(unit, r) for r in (1, 2, 3, 4)]
    _, skew, kurt = _standardize(*m)
    return ShapeMeasures(skew, kurt)


@lru_cache(maxsize=1024)
def _order_stat_moment_cached(a, b, sigma, lam, i, n, r, opts):
    th = BFParams(a, b, sigma, lam)
    s = r / lam
    base = r * math.log(sigma) + math.lgamma(1.0 - s) + _k.ln_gamma(b)

    def term_fn(core, sgn, shapes):
        # B(A, b) E_A[u^-s] = Gamma(1-s) Gamma(b) S(A, b, 0, s-1)
        sv = bf_series(shapes, b, 0.0, s - 1.0, core + base, opts)
        vals = sgn * sv.value
        vals[sgn == 0.0] = 0.0
        return vals[:, None]

    return float(order_stat_sum(th, i, n, term_fn, opts)[0])


def order_stat_moment(theta, i, n, r, opts=None):
    """``E X_{i:n}**r`` from the order-statistic coefficient expansion.

    Each coefficient multiplies the r-th moment of BF(a(i+k)+j, b, sigma, lam),
    itself summed by the mixture series.  Results are cached.

    Raises
    ------
    MomentExistenceError
        If ``r >= lam`` or ``r >= lam * b``.
    """
    th = _as_params(theta)
    r = v.positive("r", r)
    _check_series_order(th, r)
    i = v.positive_int("i", i)
    n = v.positive_int("n", n)
    return _order_stat_moment_cached(th.a, th.b, th.sigma, th.lam, i, n, r,
                                     opts or DEFAULT_OPTIONS)


def order_stat_moment_quadrature(theta, i, n, r):
    """``E X_{i:n}**r`` by quadrature of ``x**r f F**(i-1) (1-F)**(n-i) / B(i, n-i+1)``."""
    th = _as_params(theta)
    r = v.finite("r", r)
    i = v.positive_int("i", i)
    n = v.positive_int("n", n)
    if r >= th.lam * th.b * (n - i + 1):
        raise MomentExistenceError("order-statistic moment diverges")

    def weight(u):
        g = math.exp(-u)
        gm = -math.expm1(-u)
        out = 1.0
        if i > 1:
            out *= _k.inc_beta(g, gm, th.a, th.b) ** (i - 1)
        if n > i:
            out *= _k.inc_beta(gm, g, th.b, th.a) ** (n - i)
        return out

    val = beta_expectation(weight, th.a, th.b, alpha=-r / th.lam)
    return th.sigma ** r * val / math.exp(_k.ln_beta(float(i), float(n - i + 1)))


def l_moments(theta, count=4, opts=None, method="auto"):
    """First ``count`` (at most 4) L-moments.

    ``l_{r+1} = (r+1)**-1 sum_{k=0}^{r} (-1)**k C(r, k) E X_{r+1-k:r+1}``.

    Parameters
    ----------
    method : {"auto", "series", "quadrature"}
        Source of the expected order statistics.  ``"series"`` uses
        :func:`order_stat_moment` and propagates its
        :class:`ConvergenceError`; ``"quadrature"`` uses
        :func:`order_stat_moment_quadrature`; ``"auto"`` tries the series
        and switches to quadrature when it does not converge (the
        coefficient series decays only algebraically in j for non-integer
        b, and too slowly for b < 1, where quadrature is used directly).

    Raises
    ------
    MomentExistenceError
        If the mean does not exist (``lam <= 1`` or ``lam * b <= 1``).
    """
    th = _as_params(theta)
    count = v.positive_int("count", count)
    if count > 4:
        raise ValueError("count must be at most 4")
    if method not in ("auto", "series", "quadrature"):
        raise ValueError(f"unknown method {method!r}")
    if th.lam <= 1.0 or th.lam * th.b <= 1.0:
        raise MomentExistenceError("L-moments need a finite mean (lambda > 1, lambda*b > 1)")

    # for non-integer b < 1 the series is known not to reach tolerance
    slow = th.b < 1.0 and not th.b.is_integer()

    def expected(i, n):
        if method == "quadrature" or (method == "auto" and slow):
            return order_stat_moment_quadrature(th, i, n, 1.0)
        try:
            return order_stat_moment(th, i, n, 1.0, opts)
        except ConvergenceError:
            if method == "series":
                raise
            return order_stat_moment_quadrature(th, i, n, 1.0)

    out = []
    for r in range(count):
        terms = [(-1) ** k * math.comb(r, k) * expected(r + 1 - k, r + 1)
                 for k in range(r + 1)]
        out.append(math.fsum(terms) / (r + 1))
    return out


def l_moment_ratios(theta, opts=None, method="auto"):
    """L-skewness ``l3/l2`` and L-kurtosis ``l4/l2``."""
    lm = l_moments(theta, 4, opts, method)
    return lm[2] / lm[1], lm[3] / lm[1]
