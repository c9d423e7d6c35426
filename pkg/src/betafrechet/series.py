"""Series representations of the BF distribution.

Every infinite sum in this module is an instance of

    S(a, b, t, e) = sum_k (-1)**k (a + k)**e exp(-(a + k) t) / (Gamma(b - k) k!)

which gives the cdf (e = -1), the mixture density (e = 0), the raw
moments (t = 0, e = r/lam - 1) and the mixture weight total
(t = 0, e = -1) after multiplication by a simple prefactor.

For integer ``b`` the reciprocal gamma vanishes from k = b on and the
sum is finite.  Otherwise the coefficients do *not* alternate once
k > b: by the reflection formula
``(-1)**k / Gamma(b - k) = sin(pi b) Gamma(k + 1 - b) / pi``, so the tail
has constant sign and decays only like ``k**(e - b) exp(-k t)``.  At
``t = 0`` that is algebraic and direct summation would need millions of
terms.  The engine therefore sums the first ``tail_start`` terms
directly and replaces the rest by an Euler-Maclaurin estimate built
from the smooth closed form above.  Setting ``tail_start=None`` gives
pure direct summation governed by the stopping rule alone.
"""

import math
import threading
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy import integrate

from . import _validation as v
from ._backend import kernels as _k
from .distribution import BFParams, _as_params, _points, bf_cdf, bf_logpdf, bf_sf
from .errors import ConvergenceError, DivergenceError, DomainError
from .specfun import recip_gamma_logsign

__all__ = [
    "SeriesOptions",
    "SeriesValue",
    "MixtureWeights",
    "OrderStatCoeffs",
    "bf_series",
    "cdf_series",
    "cdf_closed_integer_b",
    "cdf_closed_integer_a",
    "mixture_weights",
    "mixture_pdf",
    "mixture_pdf_partial",
    "power_series_coeffs",
    "order_stat_pdf_exact",
    "order_stat_cdf_exact",
    "order_stat_coeffs",
    "order_stat_pdf_expansion",
    "order_stat_sum",
]

_LN_PI = math.log(math.pi)
_EPS = 2.220446049250313e-16


@dataclass(frozen=True)
class SeriesOptions:
    """Truncation controls shared by every infinite sum.

    Attributes
    ----------
    max_terms : int
        Hard cap on directly summed terms.
    term_tol : float
        Absolute threshold on the magnitude of a summand's contribution
        to the final value.
    consecutive_small : int
        Number of successive summands below ``term_tol`` that stops a sum.
    tail_start : int or None
        Index at which an unfinished sum switches to the Euler-Maclaurin
        tail estimate.  ``None`` disables the tail.
    max_ladder : int
        Cap on the length of the order-statistic coefficient ladders,
        whose cost grows quadratically.
    """

    max_terms: int = 100_000
    term_tol: float = 1e-14
    consecutive_small: int = 3
    tail_start: int | None = 256
    max_ladder: int = 16_384

    def __post_init__(self):
        v.positive_int("max_terms", self.max_terms)
        v.positive("term_tol", self.term_tol)
        v.positive_int("consecutive_small", self.consecutive_small)
        if self.tail_start is not None:
            v.positive_int("tail_start", self.tail_start)
        v.positive_int("max_ladder", self.max_ladder)


DEFAULT_OPTIONS = SeriesOptions()


class SeriesValue(NamedTuple):
    """Result of a series evaluation.

    ``terms`` counts directly summed terms, ``tail`` tells whether the
    Euler-Maclaurin tail was added and ``abs_error`` is a rough bound on
    truncation plus rounding error.
    """

    value: float
    terms: int
    tail: bool
    abs_error: float


# ---------------------------------------------------------------- engine


@lru_cache(maxsize=256)
def _coef_table(b, count):
    """log|(-1)^k / (Gamma(b-k) k!)| and its sign for k < count."""
    k = np.arange(count, dtype=float)
    logs, signs = recip_gamma_logsign(b - k)
    logs = logs - _k.ln_gamma_vec(k + 1.0)
    signs = signs * np.where(k % 2 == 1, -1.0, 1.0)
    logs.setflags(write=False)
    signs.setflags(write=False)
    return logs, signs


def _stop_index(small, start, run):
    """First index i >= start ending a run of ``run`` small flags, per row."""
    n_rows, n_cols = small.shape
    out = np.full(n_rows, -1)
    if n_cols < run:
        return out
    window = np.ones(run, dtype=int)
    for r in range(n_rows):
        hits = np.convolve(small[r].astype(int), window, mode="valid") == run
        idx = np.nonzero(hits)[0] + run - 1
        idx = idx[idx >= start]
        if idx.size:
            out[r] = idx[0]
    return out


def _ln_gamma_shift(z, h):
    """ln Gamma(z + h) - ln Gamma(z) without cancellation for large z."""
    return _k.ln_gamma_shift(z, h)


def _tail_logh(k, a, b, t, e, log_pref):
    """log of the k-th tail summand magnitude; ``a``, ``t``, ``log_pref`` may be arrays."""
    shared = (math.log(abs(math.sin(math.pi * b))) - _LN_PI + _ln_gamma_shift(k + 1.0, -b))
    return shared + e * np.log(a + k) - (a + k) * t + log_pref


def _em_tail(a, b, t, e, log_pref, start):
    """Euler-Maclaurin estimate of sum_{k >= start} |term_k| (constant-sign tail)."""
    n = a.size
    K = float(start)

    def integrand(z):
        if z > 600.0:
            return np.zeros(n)
        k = K * math.exp(z)
        with np.errstate(under="ignore"):
            return np.exp(_tail_logh(k, a, b, t, e, log_pref)) * k

    integral, qerr = integrate.quad_vec(integrand, 0.0, np.inf, epsabs=1e-300, epsrel=1e-12,
                                        limit=400, norm="max")
    h = np.exp(_tail_logh(K, a, b, t, e, log_pref))
    x1 = K + 1.0 - b
    x2 = K + 1.0
    ak = a + K
    d1 = _k.digamma(x1) - _k.digamma(x2) + e / ak - t
    d2 = _k.trigamma(x1) - _k.trigamma(x2) - e / ak ** 2
    d3 = _k.tetragamma(x1) - _k.tetragamma(x2) + 2.0 * e / ak ** 3
    h1 = h * d1
    h3 = h * (d3 + 3.0 * d1 * d2 + d1 ** 3)
    tail = integral + 0.5 * h - h1 / 12.0 + h3 / 720.0
    # next Euler-Maclaurin term is of order h^(5) / 30240
    err = np.abs(h * d1 ** 5) / 30240.0 + qerr
    return tail, err


def bf_series(a, b, t, e, log_pref=0.0, opts=None):
    """Vectorized engine for ``exp(log_pref) * S(a, b, t, e)``.

    ``a``, ``t`` and ``log_pref`` broadcast against each other; ``b`` and
    ``e`` are scalars.  Returns a :class:`SeriesValue` of arrays.

    Raises
    ------
    DivergenceError
        For ``t = 0`` with ``e - b >= -1`` (terms decay too slowly).
    ConvergenceError
        When the tail is disabled and ``max_terms`` terms do not satisfy
        the stopping rule; ``.partial`` holds the partial sums.
    """
    opts = opts or DEFAULT_OPTIONS
    a, t, log_pref = np.broadcast_arrays(np.atleast_1d(np.asarray(a, dtype=float)),
                                         np.atleast_1d(np.asarray(t, dtype=float)),
                                         np.atleast_1d(np.asarray(log_pref, dtype=float)))
    shape = a.shape
    a, t, log_pref = a.ravel(), t.ravel(), log_pref.ravel()
    n = a.size
    b = float(b)
    e = float(e)

    if b.is_integer():
        count = int(b)
        logs, signs = _coef_table(b, count)
        k = np.arange(count)
        with np.errstate(over="ignore", invalid="ignore"):
            lt = (logs[None, :] + e * np.log(a[:, None] + k) - (a[:, None] + k) * t[:, None]
                  + log_pref[:, None])
            terms = signs[None, :] * np.exp(lt)
        value = terms.sum(axis=1)
        err = 4.0 * _EPS * np.abs(terms).sum(axis=1) * count
        return SeriesValue(value.reshape(shape), count, False, err.reshape(shape))

    if np.any(t == 0.0) and e - b >= -1.0:
        raise DivergenceError(f"series diverges at t = 0 when e - b >= -1 (e={e}, b={b})")

    run = opts.consecutive_small
    start = int(math.ceil(b))
    if opts.tail_start is None:
        block_end = opts.max_terms
    else:
        block_end = min(opts.max_terms, max(opts.tail_start, start + 2))

    total = np.zeros(n)
    abs_total = np.zeros(n)
    done = np.zeros(n, dtype=bool)
    used = np.zeros(n, dtype=int)
    lo = 0
    block = 512
    while lo < block_end and not done.all():
        hi = min(block_end, lo + block)
        logs, signs = _coef_table(b, hi)
        k = np.arange(lo, hi)
        rows = np.nonzero(~done)[0]
        with np.errstate(over="ignore", invalid="ignore", under="ignore"):
            lt = (logs[None, lo:hi] + e * np.log(a[rows, None] + k)
                  - (a[rows, None] + k) * t[rows, None] + log_pref[rows, None])
            terms = signs[None, lo:hi] * np.exp(lt)
        small = np.abs(terms) < opts.term_tol
        # carry the run of small terms across block boundaries
        pad = max(0, min(lo, run - 1))
        if pad:
            prev_logs, prev_signs = _coef_table(b, lo)
            kp = np.arange(lo - pad, lo)
            with np.errstate(over="ignore", invalid="ignore", under="ignore"):
                lp = (prev_logs[None, lo - pad:lo] + e * np.log(a[rows, None] + kp)
                      - (a[rows, None] + kp) * t[rows, None] + log_pref[rows, None])
            small = np.concatenate([np.exp(lp) < opts.term_tol, small], axis=1)
        stop = _stop_index(small, max(0, start - (lo - pad)), run)
        for idx, r in enumerate(rows):
            if stop[idx] >= 0:
                upto = stop[idx] - pad + 1
                total[r] += terms[idx, :upto].sum()
                abs_total[r] += np.abs(terms[idx, :upto]).sum()
                used[r] = lo + upto
                done[r] = True
            else:
                total[r] += terms[idx].sum()
                abs_total[r] += np.abs(terms[idx]).sum()
                used[r] = hi
        lo = hi
        block *= 2

    err = 8.0 * _EPS * abs_total
    use_tail = False
    if not done.all():
        if opts.tail_start is None or block_end >= opts.max_terms:
            raise ConvergenceError(
                f"series not converged after {block_end} terms",
                partial=total.reshape(shape))
        rows = np.nonzero(~done)[0]
        tail, terr = _em_tail(a[rows], b, t[rows], e, log_pref[rows], block_end)
        sign = 1.0 if math.sin(math.pi * b) > 0 else -1.0
        total[rows] += sign * tail
        err[rows] += terr
        use_tail = True
    return SeriesValue(total.reshape(shape), int(used.max()), use_tail, err.reshape(shape))


def _scalar_or_array(sv, x):
    if np.ndim(x) == 0:
        return SeriesValue(float(sv.value.ravel()[0]), sv.terms, sv.tail,
                           float(sv.abs_error.ravel()[0]))
    return sv


def _ln_ratio_gamma(a, b):
    """log(Gamma(a+b)/Gamma(a))."""
    return _k.ln_gamma(a + b) - _k.ln_gamma(a)


def cdf_series(theta, x, opts=None):
    """Cdf from the expansion ``Gamma(a+b)/Gamma(a) S(a, b, t, -1)``.

    Returns a :class:`SeriesValue`; arrays in, arrays out.
    """
    th = _as_params(theta)
    xa = _points(x)
    with np.errstate(over="ignore"):
        t = np.exp(th.lam * (math.log(th.sigma) - np.log(np.atleast_1d(xa))))
    sv = bf_series(th.a, th.b, t, -1.0, _ln_ratio_gamma(th.a, th.b), opts)
    return _scalar_or_array(sv, x)


def _closed_form_y(th, xa):
    with np.errstate(over="ignore"):
        t = np.exp(th.lam * (math.log(th.sigma) - np.log(xa)))
    return t, -np.expm1(-t)


def cdf_closed_integer_b(theta, x):
    """Cdf for integer ``b``: ``y**a / Gamma(a) sum_{j<b} Gamma(a+j) (1-y)**j / j!``."""
    th = _as_params(theta)
    nb = v.integer_valued("b", th.b)
    xa = _points(x)
    t, ym = _closed_form_y(th, np.atleast_1d(xa))
    j = np.arange(nb)
    with np.errstate(divide="ignore", invalid="ignore"):
        lterms = (-th.a * t[:, None] + j * np.log(ym[:, None]) - _k.ln_gamma(th.a)
                  + _k.ln_gamma_vec(th.a + j) - _k.ln_gamma_vec(j + 1.0))
    lterms[:, 0] = -th.a * t
    out = np.exp(lterms).sum(axis=1).reshape(np.shape(xa))
    return float(out) if np.ndim(x) == 0 else out


def cdf_closed_integer_a(theta, x):
    """Cdf for integer ``a``: ``1 - (1-y)**b / Gamma(b) sum_{j<a} Gamma(b+j) y**j / j!``."""
    th = _as_params(theta)
    na = v.integer_valued("a", th.a)
    xa = _points(x)
    t, ym = _closed_form_y(th, np.atleast_1d(xa))
    j = np.arange(na)
    with np.errstate(divide="ignore", invalid="ignore"):
        lterms = (th.b * np.log(ym[:, None]) - j * t[:, None] - _k.ln_gamma(th.b)
                  + _k.ln_gamma_vec(th.b + j) - _k.ln_gamma_vec(j + 1.0))
    out = (1.0 - np.exp(lterms).sum(axis=1)).reshape(np.shape(xa))
    return float(out) if np.ndim(x) == 0 else out


# --------------------------------------------------------------- mixture


@dataclass(frozen=True)
class MixtureWeights:
    """Signed Frechet mixture: ``f = sum_k weights[k] g(scales[k], lam)``.

    ``residual`` is ``1 - sum(weights)``; ``truncated`` is False only
    when the expansion is finite (integer b).
    """

    weights: np.ndarray
    scales: np.ndarray
    truncated: bool
    residual: float = field(default=0.0)


def mixture_weights(theta, opts=None):
    """Weights ``w_k`` and Frechet scales ``sigma (k + a)**(1/lam)``.

    Integer ``b`` yields exactly ``b`` weights.  Otherwise weights are
    generated until ``consecutive_small`` successive ones fall below
    ``term_tol``.

    Raises
    ------
    ConvergenceError
        If that does not happen within ``max_terms`` weights; the partial
        :class:`MixtureWeights` is attached.
    """
    th = _as_params(theta)
    opts = opts or DEFAULT_OPTIONS
    lpref = _ln_ratio_gamma(th.a, th.b)
    if th.b.is_integer():
        count = int(th.b)
    else:
        count = None
    limit = count if count is not None else opts.max_terms
    logs, signs = _coef_table(th.b, limit)
    k = np.arange(limit)
    w = signs * np.exp(logs + lpref - np.log(th.a + k))
    scales = th.sigma * np.exp(np.log(th.a + k) / th.lam)
    if count is not None:
        return MixtureWeights(w, scales, False, float(1.0 - math.fsum(w)))
    small = (np.abs(w) < opts.term_tol)[None, :]
    stop = _stop_index(small, int(math.ceil(th.b)), opts.consecutive_small)[0]
    if stop < 0:
        partial = MixtureWeights(w, scales, True, float(1.0 - math.fsum(w)))
        raise ConvergenceError(f"mixture weights not settled within {limit} terms",
                               partial=partial)
    w = w[:stop + 1]
    return MixtureWeights(w, scales[:stop + 1], True, float(1.0 - math.fsum(w)))


def _frechet_log_density_factor(th, xa):
    return math.log(th.lam) + th.lam * math.log(th.sigma) - (th.lam + 1.0) * np.log(xa)


def mixture_pdf(theta, x, opts=None):
    """Density from the Frechet mixture, summed by the series engine."""
    th = _as_params(theta)
    xa = np.atleast_1d(_points(x))
    with np.errstate(over="ignore"):
        t = np.exp(th.lam * (math.log(th.sigma) - np.log(xa)))
    lpref = _ln_ratio_gamma(th.a, th.b) + _frechet_log_density_factor(th, xa)
    sv = bf_series(th.a, th.b, t, 0.0, lpref, opts)
    return _scalar_or_array(sv, x)


def _binomial_ratios(b, K):
    """``r_k = (-1)**k Gamma(b) / (Gamma(b-k) k!)`` for k < K.

    Built from the ratio ``r_{k+1} / r_k = -(b-1-k) / (k+1)``, so integer b
    gives exact binomial coefficients.  Falls back to log space when the
    running product overflows.
    """
    k = np.arange(K - 1, dtype=float)
    ratios = -(b - 1.0 - k) / (k + 1.0)
    with np.errstate(over="ignore", invalid="ignore"):
        r = np.concatenate([[1.0], np.cumprod(ratios)])
    if np.all(np.isfinite(r)):
        return r
    logs, signs = _coef_table(b, K)
    return signs * np.exp(logs + _k.ln_gamma(b))


def mixture_pdf_partial(theta, x, K):
    """Sum of the first ``K`` mixture components at ``x``.

    Evaluated as ``c(x) sum_{k<K} r_k G**k`` with ``G = exp(-(sigma/x)**lam)``
    and the common factor ``c(x) = lam sigma**lam x**-(lam+1) exp(-a t) / B(a, b)``,
    which keeps the rounding in each term at a few ulp.
    """
    th = _as_params(theta)
    K = v.positive_int("K", K)
    xa = np.atleast_1d(_points(x))
    r = _binomial_ratios(th.b, K)
    k = np.arange(K)
    with np.errstate(over="ignore", under="ignore"):
        t = np.exp(th.lam * (math.log(th.sigma) - np.log(xa)))
        common = np.exp(_frechet_log_density_factor(th, xa) - th.a * t - _k.ln_beta(th.a, th.b))
        poly = (r[None, :] * np.exp(-k[None, :] * t[:, None])).sum(axis=1)
        out = common * poly
    return float(out[0]) if np.ndim(x) == 0 else out.reshape(np.shape(x))


# ---------------------------------------------------------- power series


def power_series_coeffs(a_coeffs, n, K):
    """Coefficients ``c_0..c_K`` of ``(sum_k a_k z**k)**n``.

    Uses ``c_0 = a_0**n`` and
    ``c_k = (k a_0)**-1 sum_{l=1}^{k} (n l - k + l) a_l c_{k-l}``;
    missing ``a_k`` count as zero.  ``n`` may be any real number when
    ``a_0 > 0``.
    """
    coeffs = np.asarray(a_coeffs, dtype=float).ravel()
    if coeffs.size == 0 or coeffs[0] == 0.0:
        raise DomainError("a_0 must be nonzero")
    n = v.finite("n", n)
    if K < 0 or int(K) != K:
        raise DomainError(f"K must be a nonnegative integer, got {K!r}")
    K = int(K)
    a0 = coeffs[0]
    if a0 < 0.0 and not n.is_integer():
        raise DomainError("a_0 must be positive for non-integer powers")
    alpha = np.zeros(K + 1)
    m = min(K + 1, coeffs.size)
    alpha[:m] = coeffs[:m] / a0
    return _k.power_ladder(alpha, n) * a0 ** n


# ---------------------------------------------------- order statistics


def _check_rank(i, n):
    n = v.positive_int("n", n)
    i = v.positive_int("i", i)
    if i > n:
        raise DomainError(f"rank i={i} exceeds sample size n={n}")
    return i, n


def _ln_binom(n, k):
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def order_stat_pdf_exact(theta, i, n, x):
    """Density of the i-th order statistic of n draws, from f and F directly."""
    th = _as_params(theta)
    i, n = _check_rank(i, n)
    xa = _points(x)
    with np.errstate(divide="ignore"):
        out = np.asarray(bf_logpdf(th, xa)) - _k.ln_beta(float(i), float(n - i + 1))
        if i > 1:
            out = out + (i - 1) * np.log(np.asarray(bf_cdf(th, xa)))
        if n > i:
            out = out + (n - i) * np.log(np.asarray(bf_sf(th, xa)))
    out = np.exp(out)
    return float(out) if np.ndim(x) == 0 else out


def order_stat_cdf_exact(theta, i, n, x):
    """Cdf of the i-th order statistic.

    Equal to ``sum_{r=i}^{n} C(n, r) F**r (1-F)**(n-r)``, evaluated as the
    regularized incomplete beta ``I_F(i, n-i+1)`` with ``1 - F`` supplied
    from the survival function so that both tails keep full precision.
    """
    th = _as_params(theta)
    i, n = _check_rank(i, n)
    xa = np.atleast_1d(_points(x))
    F = np.atleast_1d(bf_cdf(th, xa))
    S = np.atleast_1d(bf_sf(th, xa))
    out = _k.inc_beta_vec(F, S, float(i), float(n - i + 1))
    return float(out[0]) if np.ndim(x) == 0 else out.reshape(np.shape(x))


_LADDER_LOCK = threading.Lock()
_LADDERS = {}


def _alpha(a, b, size):
    """Normalized base coefficients alpha_l = d_l / d_0 of F's power series."""
    logs, signs = _coef_table(b, size)
    l = np.arange(size)
    lg0 = -_k.ln_gamma(b) - math.log(a)
    with np.errstate(under="ignore"):
        return signs * np.exp(logs - np.log(a + l) - lg0)


def _ladder(a, b, m, size):
    """Normalized coefficients of (sum_l alpha_l z**l)**m, first ``size``."""
    key = (a, b, m)
    with _LADDER_LOCK:
        cached = _LADDERS.get(key)
    if cached is not None and cached.size >= size:
        return cached[:size]
    out = _k.power_ladder(_alpha(a, b, size), float(m))
    out.setflags(write=False)
    with _LADDER_LOCK:
        if len(_LADDERS) > 512:
            _LADDERS.clear()
        _LADDERS[key] = out
    return out


def _j_count_integer(b, m):
    return m * (int(b) - 1) + 1


def _entry_core(th, i, n, k, size):
    """Signed log coefficients of the k-th block, without the B(A_j, b) factor.

    The full table entry is ``sign * exp(core + ln B(A_j, b))`` with
    ``A_j = a (i + k) + j``; the B factor cancels against the density
    normalizer of BF(A_j, b), so the evaluators work with ``core``.
    """
    m = i + k - 1
    c = _ladder(th.a, th.b, m, size)
    with np.errstate(divide="ignore"):
        core = (_ln_binom(n - i, k) - m * math.log(th.a) + np.log(np.abs(c))
                - (i + k) * _k.ln_beta(th.a, th.b) - _k.ln_beta(float(i), float(n - i + 1)))
    sgn = np.sign(c) * (-1.0 if k % 2 else 1.0)
    shapes = th.a * (i + k) + np.arange(size)
    return core, sgn, shapes


def _shape_ln_beta(shapes, b):
    return _k.ln_gamma_vec(shapes) + _k.ln_gamma(b) - _k.ln_gamma_vec(shapes + b)


def _power_law_tail(terms):
    """Tail estimate for column-wise terms decaying like C j**-p with fixed sign.

    Returns ``(tail, err, ok)``; ``ok`` is False where the decay exponent
    measured on two windows disagrees, the sign is not settled, or
    ``p <= 1.1``.
    """
    size = terms.shape[0]
    w = max(4, size // 64)
    centres = []
    means = []
    for end in (size // 16, size // 4, size):
        block = np.abs(terms[end - w:end])
        centres.append(end - 0.5 * w)
        means.append(block.mean(axis=0))
    with np.errstate(divide="ignore", invalid="ignore"):
        p1 = np.log(means[0] / means[1]) / math.log(centres[1] / centres[0])
        p2 = np.log(means[1] / means[2]) / math.log(centres[2] / centres[1])
    last = terms[size - w:]
    settled = np.all(np.sign(last) == np.sign(last[-1]), axis=0)
    ok = settled & np.isfinite(p1) & np.isfinite(p2) & (p2 > 1.1) & (np.abs(p1 - p2) < 0.05 * p2)
    pe = np.where(ok, p2, 2.0)
    tail = terms[-1] * (size / (pe - 1.0) - 0.5)
    with np.errstate(invalid="ignore"):
        err = np.abs(tail) * np.abs(p1 - p2) / (pe - 1.0)
    return np.where(ok, tail, 0.0), np.where(ok, err, np.inf), ok


def order_stat_sum(theta, i, n, term_fn, opts=None, magnitude=False):
    """Sum ``term_fn`` over the (j, k) coefficient table of X_{i:n}.

    ``term_fn(core, sign, shapes)`` returns a ``(len(core), p)`` array of
    contributions for the given block of j indices.  For non-integer b the
    j-range of each k block doubles until either the trailing
    ``consecutive_small`` rows are below ``term_tol`` everywhere or (when
    ``opts.tail_start`` is set and at least 1024 terms are in) the terms
    follow a clean power law whose extrapolated tail is known to a
    relative 1e-9.  With ``magnitude=True`` the sum of absolute
    contributions is returned as well, as ``(total, abs_total)``; their
    ratio measures the cancellation in the result.

    Raises
    ------
    ConvergenceError
        When ``max_ladder`` is reached first; ``.partial`` carries the sum.
    """
    th = _as_params(theta)
    i, n = _check_rank(i, n)
    opts = opts or DEFAULT_OPTIONS
    total = None
    abs_total = 0.0
    run = opts.consecutive_small
    for k in range(n - i + 1):
        m = i + k - 1
        if th.b.is_integer() or m == 0:
            size = _j_count_integer(th.b, m) if th.b.is_integer() else 1
            terms = term_fn(*_entry_core(th, i, n, k, size))
            block = terms.sum(axis=0)
            abs_total = abs_total + np.abs(terms).sum(axis=0)
        else:
            size = 64
            while True:
                terms = term_fn(*_entry_core(th, i, n, k, size))
                tiny = np.all(np.abs(terms[-run:]) < opts.term_tol, axis=0)
                if np.all(tiny):
                    block = terms.sum(axis=0)
                    abs_total = abs_total + np.abs(terms).sum(axis=0)
                    break
                if opts.tail_start is not None and size >= 1024:
                    partial = terms.sum(axis=0)
                    tail, err, ok = _power_law_tail(terms)
                    good = tiny | (ok & (err <= 1e-9 * np.maximum(1.0, np.abs(partial))))
                    if np.all(good):
                        block = partial + np.where(tiny, 0.0, tail)
                        abs_total = abs_total + np.abs(terms).sum(axis=0) + np.abs(tail)
                        break
                if size >= opts.max_ladder:
                    partial = terms.sum(axis=0)
                    raise ConvergenceError(
                        f"order-statistic series not converged within {size} j-terms",
                        partial=partial if total is None else total + partial)
                size = min(2 * size, opts.max_ladder)
        total = block if total is None else total + block
    if magnitude:
        return total, abs_total
    return total


@dataclass(frozen=True)
class OrderStatCoeffs:
    """Coefficient table of the order-statistic density expansion.

    ``f_{i:n}(x) = sum_{(j, k)} table[(j, k)] * bf_pdf((a(i+k)+j, b, sigma, lam), x)``.
    ``log_abs``, ``sign`` and ``shapes`` hold the same entries as one
    array per k, for magnitudes beyond double range.
    """

    i: int
    n: int
    table: dict
    integer_b: bool
    log_abs: tuple = ()
    sign: tuple = ()
    shapes: tuple = ()

    def pdf(self, theta, x):
        """Evaluate the expansion at ``x`` with the table as stored."""
        th = _as_params(theta)
        xa = np.atleast_1d(_points(x)).astype(float)
        total = np.zeros(xa.shape)
        for lab, sgn, shp in zip(self.log_abs, self.sign, self.shapes):
            core = lab - _shape_ln_beta(shp, th.b)
            total += _pdf_terms(th, xa)(core, sgn, shp).sum(axis=0)
        return float(total[0]) if np.ndim(x) == 0 else total.reshape(np.shape(x))


def order_stat_coeffs(theta, i, n, opts=None, j_terms=None):
    """Coefficient table of the order-statistic density expansion.

    For integer ``b`` the j-range is finite, ``0..(i+k-1)(b-1)``.  For
    non-integer ``b`` the ladder is extended (doubling) until
    ``consecutive_small`` trailing entries fall below ``term_tol``, or is
    cut at ``j_terms`` when given.

    Raises
    ------
    ConvergenceError
        When the entries do not settle within ``opts.max_ladder``; the
        partial table is attached.
    """
    th = _as_params(theta)
    i, n = _check_rank(i, n)
    opts = opts or DEFAULT_OPTIONS
    integer_b = th.b.is_integer()
    logs_all, signs_all, shapes_all = [], [], []
    unsettled = False
    for k in range(n - i + 1):
        m = i + k - 1
        if integer_b:
            size = _j_count_integer(th.b, m)
        elif m == 0:
            size = 1
        elif j_terms is not None:
            size = int(j_terms)
        else:
            size = 64
        while True:
            core, sgn, shp = _entry_core(th, i, n, k, size)
            lab = core + _shape_ln_beta(shp, th.b)
            if integer_b or m == 0 or j_terms is not None:
                break
            small = (np.exp(lab) < opts.term_tol)[None, :]
            stop = _stop_index(small, 0, opts.consecutive_small)[0]
            if stop >= 0:
                lab, sgn, shp = lab[:stop + 1], sgn[:stop + 1], shp[:stop + 1]
                break
            if size >= opts.max_ladder:
                unsettled = True
                break
            size = min(2 * size, opts.max_ladder)
        logs_all.append(lab)
        signs_all.append(sgn)
        shapes_all.append(shp)
    table = {}
    for k, (lab, sgn) in enumerate(zip(logs_all, signs_all)):
        with np.errstate(over="ignore"):
            vals = sgn * np.exp(lab)
        for j, val in enumerate(vals):
            table[(j, k)] = float(val)
    result = OrderStatCoeffs(i, n, table, integer_b, tuple(logs_all), tuple(signs_all),
                             tuple(shapes_all))
    if unsettled:
        raise ConvergenceError("order-statistic coefficients not settled within max_ladder",
                               partial=result)
    return result


def _pdf_terms(th, xa):
    """term_fn for the density expansion at the points ``xa``."""
    logt = th.lam * (math.log(th.sigma) - np.log(xa))
    with np.errstate(over="ignore"):
        t = np.exp(logt)
    common = math.log(th.lam) + logt - np.log(xa)
    if th.b != 1.0:
        common = common + (th.b - 1.0) * np.where(
            t > 0.6931471805599453, np.log1p(-np.exp(-np.maximum(t, 0.6931471805599453))),
            np.log(-np.expm1(-np.minimum(t, 0.6931471805599453))))

    def term_fn(core, sgn, shapes):
        with np.errstate(over="ignore", under="ignore", invalid="ignore"):
            lt = core[:, None] - shapes[:, None] * t[None, :] + common[None, :]
            out = sgn[:, None] * np.exp(lt)
        out[sgn == 0.0] = 0.0
        return np.nan_to_num(out, nan=0.0)

    return term_fn


def order_stat_pdf_expansion(theta, i, n, x, opts=None, with_error=False):
    """Order-statistic density from the coefficient expansion.

    The j-range adapts to ``x``: near the upper tail the terms decay
    only like ``j**(-b-1) G**j`` with ``G = exp(-(sigma/x)**lam)`` close to
    one, so the ladder is doubled until the trailing contributions at
    every requested point fall below ``term_tol``.

    The expansion is a signed sum whose terms can exceed the result by
    many orders of magnitude when G is close to one (large a and b, upper
    quantiles).  ``with_error=True`` returns ``(value, bound)`` where
    ``bound = 64 eps sum|terms|`` estimates the rounding error.
    """
    th = _as_params(theta)
    xa = np.atleast_1d(_points(x)).astype(float)
    total, mag = order_stat_sum(th, i, n, _pdf_terms(th, xa), opts, magnitude=True)
    bound = 64.0 * _EPS * mag
    if np.ndim(x) == 0:
        value, bound = float(total[0]), float(bound[0])
    else:
        value, bound = total.reshape(np.shape(x)), bound.reshape(np.shape(x))
    return (value, bound) if with_error else value
