"""Pure-Python implementation of the numerical kernels.

This module mirrors ``_kernels.pyx`` function for function.  It is used
when the compiled extension is unavailable or when the environment
variable ``BETAFRECHET_PURE_PYTHON`` is set.  Inputs are assumed to be
validated by the public wrappers in :mod:`betafrechet.specfun`; invalid
arguments produce ``nan`` rather than exceptions.
"""

import math

import numpy as np

BACKEND = "python"

EPS = 2.220446049250313e-16
FPMIN = 1e-300
LN_SQRT_2PI = 0.91893853320467274178

# Lanczos-type series, g = 671/128, 14 terms (Numerical Recipes, 3rd ed.)
_LANCZOS_G = 5.24218750000000000
_LANCZOS_C0 = 0.999999999999997092
_LANCZOS = (
    57.1562356658629235,
    -59.5979603554754912,
    14.1360979747417471,
    -0.491913816097620199,
    0.339946499848118887e-4,
    0.465236289270485756e-4,
    -0.983744753048795646e-4,
    0.158088703224912494e-3,
    -0.210264441724104883e-3,
    0.217439618115212643e-3,
    -0.164318106536763890e-3,
    0.844182239838527433e-4,
    -0.261908384015814087e-4,
    0.368991826595316234e-5,
)

_SHIFT = 10.0


def ln_gamma(x):
    if not x > 0.0 or math.isinf(x):
        return math.nan
    tmp = x + _LANCZOS_G
    tmp = (x + 0.5) * math.log(tmp) - tmp
    ser = _LANCZOS_C0
    y = x
    for c in _LANCZOS:
        y += 1.0
        ser += c / y
    return tmp + math.log(2.5066282746310005 * ser / x)


def ln_gamma_shift(z, h):
    """ln Gamma(z + h) - ln Gamma(z), free of cancellation for large z."""
    if z < 1e4 or z < 30.0 * (abs(h) + 1.0) ** 2:
        return ln_gamma(z + h) - ln_gamma(z)
    # sum_n (-1)^(n+1) (B_{n+1}(h) - B_{n+1}(0)) / (n (n+1) z^n), Bernoulli polynomials
    b2 = h * h - h
    b3 = h ** 3 - 1.5 * h * h + 0.5 * h
    b4 = h ** 4 - 2.0 * h ** 3 + h * h
    b5 = h ** 5 - 2.5 * h ** 4 + 5.0 / 3.0 * h ** 3 - h / 6.0
    r = 1.0 / z
    return h * math.log(z) + r * (b2 / 2.0 - r * (b3 / 6.0 - r * (b4 / 12.0 - r * b5 / 20.0)))


def ln_beta(a, b):
    if b > a:
        return ln_gamma(a) - ln_gamma_shift(b, a)
    return ln_gamma(b) - ln_gamma_shift(a, b)


def digamma(x):
    if not x > 0.0:
        return math.nan
    acc = 0.0
    while x < _SHIFT:
        acc -= 1.0 / x
        x += 1.0
    r = 1.0 / (x * x)
    series = r * (1.0 / 12 - r * (1.0 / 120 - r * (1.0 / 252 - r * (
        1.0 / 240 - r * (1.0 / 132 - r * (691.0 / 32760 - r / 12.0))))))
    return acc + math.log(x) - 0.5 / x - series


def trigamma(x):
    if not x > 0.0:
        return math.nan
    acc = 0.0
    while x < _SHIFT:
        acc += 1.0 / (x * x)
        x += 1.0
    r = 1.0 / (x * x)
    series = (1.0 / 6 - r * (1.0 / 30 - r * (1.0 / 42 - r * (
        1.0 / 30 - r * (5.0 / 66 - r * (691.0 / 2730 - r * 7.0 / 6))))))
    return acc + 1.0 / x + 0.5 * r + series * r / x


def tetragamma(x):
    if not x > 0.0:
        return math.nan
    acc = 0.0
    while x < _SHIFT:
        acc -= 2.0 / (x * x * x)
        x += 1.0
    r = 1.0 / (x * x)
    series = 0.5 - r * (1.0 / 6 - r * (1.0 / 6 - r * (3.0 / 10 - r * (5.0 / 6))))
    return acc - r - r / x - series * r * r


def log1mexp(t):
    """log(1 - exp(-t)) for t > 0."""
    if t > 0.6931471805599453:
        return math.log1p(-math.exp(-t))
    return math.log(-math.expm1(-t))


def _betacf(x, a, b):
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < FPMIN:
        d = FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, 100000):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < FPMIN:
            d = FPMIN
        c = 1.0 + aa / c
        if abs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < FPMIN:
            d = FPMIN
        c = 1.0 + aa / c
        if abs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < EPS:
            return h
    return math.nan


def inc_beta(y, ym, a, b):
    """Regularized incomplete beta I_y(a, b); ``ym`` must equal 1 - y."""
    if y <= 0.0:
        return 0.0
    if ym <= 0.0:
        return 1.0
    lnfront = a * math.log(y) + b * math.log(ym) - ln_beta(a, b)
    if y < (a + 1.0) / (a + b + 2.0):
        return math.exp(lnfront) * _betacf(y, a, b) / a
    return 1.0 - math.exp(lnfront) * _betacf(ym, b, a) / b


def inv_inc_beta(p, a, b):
    """Solve I_y(a, b) = p for y by safeguarded Halley iteration."""
    if p <= 0.0:
        return 0.0
    if p >= 1.0:
        return 1.0
    if a >= 1.0 and b >= 1.0:
        pp = p if p < 0.5 else 1.0 - p
        t = math.sqrt(-2.0 * math.log(pp))
        x = (2.30753 + t * 0.27061) / (1.0 + t * (0.99229 + t * 0.04481)) - t
        if p < 0.5:
            x = -x
        al = (x * x - 3.0) / 6.0
        h = 2.0 / (1.0 / (2.0 * a - 1.0) + 1.0 / (2.0 * b - 1.0))
        w = x * math.sqrt(al + h) / h - (1.0 / (2.0 * b - 1.0) - 1.0 / (2.0 * a - 1.0)) * (
            al + 5.0 / 6.0 - 2.0 / (3.0 * h))
        if w > 300.0:
            y = 0.0
        else:
            y = a / (a + b * math.exp(2.0 * w))
    else:
        lna = math.log(a / (a + b))
        lnb = math.log(b / (a + b))
        t = math.exp(a * lna) / a
        u = math.exp(b * lnb) / b
        w = t + u
        if p < t / w:
            y = math.pow(a * w * p, 1.0 / a)
        else:
            y = 1.0 - math.pow(b * w * (1.0 - p), 1.0 / b)
    lnb_ab = ln_beta(a, b)
    lo = 0.0
    hi = 1.0
    for _ in range(1000):
        if not lo < y < hi:
            y = 0.5 * (lo + hi)
        f = inc_beta(y, 1.0 - y, a, b) - p
        if f == 0.0:
            return y
        if f < 0.0:
            lo = y
        else:
            hi = y
        if hi - lo <= 2.0 * EPS * hi:
            return y
        dens = math.exp((a - 1.0) * math.log(y) + (b - 1.0) * math.log1p(-y) - lnb_ab)
        if dens > 0.0 and math.isfinite(dens):
            u = f / dens
            corr = u * ((a - 1.0) / y - (b - 1.0) / (1.0 - y))
            ynew = y - u / (1.0 - 0.5 * min(1.0, corr))
            if not lo < ynew < hi:
                ynew = 0.5 * (lo + hi)
        else:
            ynew = 0.5 * (lo + hi)
        if abs(ynew - y) <= 4.0 * EPS * y:
            return ynew
        y = ynew
    return y


def _gamma_p_series(s, x, lnfront):
    ap = s
    total = 1.0 / s
    delta = total
    for _ in range(100000):
        ap += 1.0
        delta *= x / ap
        total += delta
        if abs(delta) < abs(total) * EPS:
            break
    return total * math.exp(lnfront)


def _gamma_q_cf_log(s, x, lnfront):
    bb = x + 1.0 - s
    c = 1.0 / FPMIN
    d = 1.0 / bb
    h = d
    for i in range(1, 100000):
        an = -i * (i - s)
        bb += 2.0
        d = an * d + bb
        if abs(d) < FPMIN:
            d = FPMIN
        c = bb + an / c
        if abs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < EPS:
            break
    return lnfront + math.log(h)


def log_gamma_q(s, x):
    """log of the regularized upper incomplete gamma Q(s, x)."""
    if x <= 0.0:
        return 0.0
    lnfront = -x + s * math.log(x) - ln_gamma(s)
    if x < s + 1.0:
        return math.log1p(-_gamma_p_series(s, x, lnfront))
    return _gamma_q_cf_log(s, x, lnfront)


def gamma_q(s, x):
    return math.exp(log_gamma_q(s, x))


def ln_gamma_vec(x):
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    flat_in = x.ravel()
    flat_out = out.ravel()
    for i in range(flat_in.size):
        flat_out[i] = ln_gamma(float(flat_in[i]))
    return out


def inc_beta_vec(y, ym, a, b):
    y = np.asarray(y, dtype=float)
    ym = np.asarray(ym, dtype=float)
    out = np.empty(y.shape)
    fy, fym, fo = y.ravel(), ym.ravel(), out.ravel()
    for i in range(fy.size):
        fo[i] = inc_beta(float(fy[i]), float(fym[i]), a, b)
    return out


def inv_inc_beta_vec(p, a, b):
    p = np.asarray(p, dtype=float)
    out = np.empty(p.shape)
    fp, fo = p.ravel(), out.ravel()
    for i in range(fp.size):
        fo[i] = inv_inc_beta(float(fp[i]), a, b)
    return out


def _log1mexp_vec(t):
    return np.where(t > 0.6931471805599453,
                    np.log1p(-np.exp(-np.maximum(t, 0.6931471805599453))),
                    np.log(-np.expm1(-np.minimum(t, 0.6931471805599453))))


def loglik_sum(a, b, sigma, lam, x):
    """Total log-density of the sample ``x`` under BF(a, b, sigma, lam)."""
    x = np.asarray(x, dtype=float)
    logratio = math.log(sigma) - np.log(x)
    t = np.exp(lam * logratio)
    terms = lam * logratio - np.log(x) - a * t
    if b != 1.0:
        terms = terms + (b - 1.0) * _log1mexp_vec(t)
    return float(x.size * (math.log(lam) - ln_beta(a, b)) + terms.sum())


def score_sum(a, b, sigma, lam, x):
    """Analytic gradient of :func:`loglik_sum` in (a, b, sigma, lam)."""
    x = np.asarray(x, dtype=float)
    n = x.size
    logratio = math.log(sigma) - np.log(x)
    t = np.exp(lam * logratio)
    dab = digamma(a + b)
    drift = a - (b - 1.0) / np.expm1(t)
    td = t * drift
    out = np.empty(4)
    out[0] = n * (dab - digamma(a)) - t.sum()
    out[1] = n * (dab - digamma(b)) + _log1mexp_vec(t).sum()
    out[2] = (lam / sigma) * (n - td.sum())
    out[3] = n / lam + (logratio * (1.0 - td)).sum()
    return out


def power_ladder(alpha, m):
    """Coefficients of (sum_l alpha_l z^l)^m given alpha_0 = 1.

    Returns an array of the same length as ``alpha`` holding the
    normalized coefficients, computed by the classical recursion
    c_j = (1/j) sum_{l=1}^{j} ((m + 1) l - j) alpha_l c_{j-l}.
    """
    alpha = np.asarray(alpha, dtype=float)
    size = alpha.size
    c = np.zeros(size)
    if size == 0:
        return c
    c[0] = 1.0
    ell = np.arange(1, size, dtype=float)
    for j in range(1, size):
        weights = ((m + 1.0) * ell[:j] - j) * alpha[1:j + 1]
        c[j] = np.dot(weights, c[j - 1::-1]) / j
    return c
