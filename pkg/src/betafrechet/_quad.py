"""Quadrature in the beta log-scale.

If ``X ~ BF(a, b, sigma, lam)`` then ``V = exp(-(sigma/X)**lam)`` is
Beta(a, b), and ``u = -log V = (sigma/X)**lam`` has density
``exp(-a u) (1 - exp(-u))**(b - 1) / B(a, b)`` on (0, inf).  Every
expectation this package needs (moments, T integrals, Fisher
information, order-statistic moments) is an integral of that shape, so
one routine handles them all.  The algebraic behaviour ``u**e`` at the
origin is passed to QUADPACK's QAWS rule as a weight, which keeps the
accuracy near 1e-12 even when ``e`` is close to -1.
"""

import math

import numpy as np
from scipy import integrate

from ._backend import kernels as _k
from .errors import ConvergenceError


def _log_sinch(u):
    """log((1 - exp(-u)) / u), with the u -> 0 limit."""
    if u < 1e-8:
        return -0.5 * u
    return _k.log1mexp(u) - math.log(u)


def _moment_points(a, c):
    """Rough centre and spread of u, used only to place breakpoints."""
    c = max(c, 0.05)
    mean = _k.digamma(a + c) - _k.digamma(a)
    sd = math.sqrt(max(_k.trigamma(a) - _k.trigamma(a + c), 0.0))
    return mean, sd


def u_integral(func, a, c, alpha=0.0, logpow=0, log_scale=0.0,
               epsabs=1e-13, epsrel=1e-12, limit=500, tol_fail=1e-7, weighted=True):
    """Integral over u in (0, inf) of

        exp(-a u - log_scale) (1 - exp(-u))**(c - 1) u**alpha (log u)**logpow func(u)

    Parameters
    ----------
    func : callable or None
        Smooth scalar function of u.  ``None`` means 1.
    a : float
        Exponential rate, must be > 0.
    c : float
        Power of ``1 - exp(-u)`` plus one; ``c - 1 + alpha > -1`` is
        required for convergence at the origin.
    alpha : float
        Extra power of u.
    logpow : int
        Power of ``log u``.
    log_scale : float
        Subtracted in the exponent, e.g. ``log B(a, b)`` to normalize.
    weighted : bool
        Use the QAWS algebraic weight on the first panel.  Pass False
        when ``func`` itself is singular at 0; plain QAGS is then used,
        which never evaluates the endpoint.

    Raises
    ------
    ConvergenceError
        If QUADPACK reports an error estimate above ``tol_fail`` relative
        to ``max(1, |value|)``.
    """
    f = func if func is not None else (lambda u: 1.0)
    e0 = c - 1.0 + alpha
    if e0 <= -1.0:
        raise ValueError("integral diverges at u = 0")

    try:
        return _u_integral(f, a, c, alpha, logpow, log_scale, epsabs, epsrel, limit,
                           tol_fail, weighted, e0)
    except (OverflowError, ZeroDivisionError) as exc:
        raise ConvergenceError(f"quadrature failed: {exc}") from None


def _u_integral(f, a, c, alpha, logpow, log_scale, epsabs, epsrel, limit, tol_fail,
                weighted, e0):
    mean, sd = _moment_points(a, c + alpha)
    u1 = min(1.0, 0.5 * mean) if mean > 0 else 1.0
    hi = max(mean + 14.0 * sd, 4.0 * u1, 50.0 / a if a < 1 else 0.0, 2.0)
    total = 0.0
    err = 0.0
    # full_output keeps QUADPACK quiet; the error estimate is checked below
    opts = {"epsabs": epsabs, "epsrel": epsrel, "limit": limit, "full_output": 1}

    def smooth(u):
        # the part left after removing u**e0 (and one log for alg-loga)
        lg = -a * u - log_scale
        if c != 1.0:
            lg += (c - 1.0) * _log_sinch(u)
        return math.exp(lg)

    def full(u):
        lg = -a * u - log_scale + alpha * math.log(u)
        if c != 1.0:
            lg += (c - 1.0) * _k.log1mexp(u)
        out = math.exp(lg) * f(u)
        if logpow:
            out *= math.log(u) ** logpow
        return out

    # [0, u1] with the algebraic (and optionally logarithmic) weight.  QAWS
    # samples the endpoint, so higher log powers go to plain QAGS instead;
    # so does a large exponent, which leaves nothing to resolve at the origin
    # and spoils QAWS's modified moments
    if not weighted or e0 > 20.0:
        val, e, *_ = integrate.quad(full, 0.0, u1, **opts)
    elif logpow == 0:
        val, e, *_ = integrate.quad(lambda u: smooth(u) * f(u), 0.0, u1, weight="alg",
                                    wvar=(e0, 0.0), **opts)
    elif logpow == 1:
        val, e, *_ = integrate.quad(lambda u: smooth(u) * f(u), 0.0, u1, weight="alg-loga",
                                    wvar=(e0, 0.0), **opts)
    else:
        val, e, *_ = integrate.quad(full, 0.0, u1, **opts)
    total += val
    err += e

    pts = sorted({p for p in (1.0, mean, mean + sd, mean + 4.0 * sd) if u1 < p < hi})
    val, e, *_ = integrate.quad(full, u1, hi, points=pts or None, **opts)
    total += val
    err += e
    val, e, *_ = integrate.quad(full, hi, np.inf, **opts)
    total += val
    err += e
    if not math.isfinite(total) or err > tol_fail * max(1.0, abs(total)):
        raise ConvergenceError(f"quadrature error estimate {err:.3g} too large", partial=total)
    return total


def beta_expectation(func, a, b, alpha=0.0, logpow=0, **kw):
    """E[u**alpha (log u)**logpow func(u)] with u = -log V, V ~ Beta(a, b)."""
    return u_integral(func, a, b, alpha=alpha, logpow=logpow, log_scale=_k.ln_beta(a, b), **kw)
