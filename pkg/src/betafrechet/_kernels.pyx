# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numerical kernels.

Function-for-function twin of ``_kernels_py``.  The algorithms and the
constants are identical so the two backends agree to rounding.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport log, exp, sqrt, pow, log1p, expm1, fabs, isfinite, NAN, INFINITY

cnp.import_array()

BACKEND = "cython"

cdef double EPS = 2.220446049250313e-16
cdef double FPMIN = 1e-300
cdef double LN2 = 0.6931471805599453
cdef double SHIFT = 10.0

cdef double LANCZOS_G = 5.24218750000000000
cdef double LANCZOS_C0 = 0.999999999999997092
cdef double[14] LANCZOS = [
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
]


cdef inline double _ln_gamma(double x) nogil:
    cdef double tmp, ser, y
    cdef int i
    if not x > 0.0 or x == INFINITY:
        return NAN
    tmp = x + LANCZOS_G
    tmp = (x + 0.5) * log(tmp) - tmp
    ser = LANCZOS_C0
    y = x
    for i in range(14):
        y += 1.0
        ser += LANCZOS[i] / y
    return tmp + log(2.5066282746310005 * ser / x)


cdef double _ln_gamma_shift(double z, double h) nogil:
    # ln Gamma(z + h) - ln Gamma(z); Bernoulli-polynomial series for large z
    cdef double b2, b3, b4, b5, r
    if z < 1e4 or z < 30.0 * (fabs(h) + 1.0) * (fabs(h) + 1.0):
        return _ln_gamma(z + h) - _ln_gamma(z)
    b2 = h * h - h
    b3 = h * h * h - 1.5 * h * h + 0.5 * h
    b4 = h * h * h * h - 2.0 * h * h * h + h * h
    b5 = h * h * h * h * h - 2.5 * h * h * h * h + 5.0 / 3.0 * h * h * h - h / 6.0
    r = 1.0 / z
    return h * log(z) + r * (b2 / 2.0 - r * (b3 / 6.0 - r * (b4 / 12.0 - r * b5 / 20.0)))


cdef inline double _ln_beta(double a, double b) nogil:
    if b > a:
        return _ln_gamma(a) - _ln_gamma_shift(b, a)
    return _ln_gamma(b) - _ln_gamma_shift(a, b)


cdef double _digamma(double x) nogil:
    cdef double acc = 0.0, r, series
    if not x > 0.0:
        return NAN
    while x < SHIFT:
        acc -= 1.0 / x
        x += 1.0
    r = 1.0 / (x * x)
    series = r * (1.0 / 12 - r * (1.0 / 120 - r * (1.0 / 252 - r * (
        1.0 / 240 - r * (1.0 / 132 - r * (691.0 / 32760 - r / 12.0))))))
    return acc + log(x) - 0.5 / x - series


cdef double _trigamma(double x) nogil:
    cdef double acc = 0.0, r, series
    if not x > 0.0:
        return NAN
    while x < SHIFT:
        acc += 1.0 / (x * x)
        x += 1.0
    r = 1.0 / (x * x)
    series = (1.0 / 6 - r * (1.0 / 30 - r * (1.0 / 42 - r * (
        1.0 / 30 - r * (5.0 / 66 - r * (691.0 / 2730 - r * 7.0 / 6))))))
    return acc + 1.0 / x + 0.5 * r + series * r / x


cdef double _tetragamma(double x) nogil:
    cdef double acc = 0.0, r, series
    if not x > 0.0:
        return NAN
    while x < SHIFT:
        acc -= 2.0 / (x * x * x)
        x += 1.0
    r = 1.0 / (x * x)
    series = 0.5 - r * (1.0 / 6 - r * (1.0 / 6 - r * (3.0 / 10 - r * (5.0 / 6))))
    return acc - r - r / x - series * r * r


cdef inline double _log1mexp(double t) nogil:
    if t > LN2:
        return log1p(-exp(-t))
    return log(-expm1(-t))


cdef double _betacf(double x, double a, double b) nogil:
    cdef double qab = a + b, qap = a + 1.0, qam = a - 1.0
    cdef double c = 1.0, d, h, aa, delta
    cdef int m, m2
    d = 1.0 - qab * x / qap
    if fabs(d) < FPMIN:
        d = FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, 100000):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if fabs(d) < FPMIN:
            d = FPMIN
        c = 1.0 + aa / c
        if fabs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if fabs(d) < FPMIN:
            d = FPMIN
        c = 1.0 + aa / c
        if fabs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if fabs(delta - 1.0) < EPS:
            return h
    return NAN


cdef double _inc_beta(double y, double ym, double a, double b) nogil:
    cdef double lnfront
    if y <= 0.0:
        return 0.0
    if ym <= 0.0:
        return 1.0
    lnfront = a * log(y) + b * log(ym) - _ln_beta(a, b)
    if y < (a + 1.0) / (a + b + 2.0):
        return exp(lnfront) * _betacf(y, a, b) / a
    return 1.0 - exp(lnfront) * _betacf(ym, b, a) / b


cdef double _inv_inc_beta(double p, double a, double b) nogil:
    cdef double pp, t, x, al, h, w, y, lna, lnb, u, lnb_ab, lo, hi, f, dens, corr, ynew
    cdef int it
    if p <= 0.0:
        return 0.0
    if p >= 1.0:
        return 1.0
    if a >= 1.0 and b >= 1.0:
        pp = p if p < 0.5 else 1.0 - p
        t = sqrt(-2.0 * log(pp))
        x = (2.30753 + t * 0.27061) / (1.0 + t * (0.99229 + t * 0.04481)) - t
        if p < 0.5:
            x = -x
        al = (x * x - 3.0) / 6.0
        h = 2.0 / (1.0 / (2.0 * a - 1.0) + 1.0 / (2.0 * b - 1.0))
        w = x * sqrt(al + h) / h - (1.0 / (2.0 * b - 1.0) - 1.0 / (2.0 * a - 1.0)) * (
            al + 5.0 / 6.0 - 2.0 / (3.0 * h))
        if w > 300.0:
            y = 0.0
        else:
            y = a / (a + b * exp(2.0 * w))
    else:
        lna = log(a / (a + b))
        lnb = log(b / (a + b))
        t = exp(a * lna) / a
        u = exp(b * lnb) / b
        w = t + u
        if p < t / w:
            y = pow(a * w * p, 1.0 / a)
        else:
            y = 1.0 - pow(b * w * (1.0 - p), 1.0 / b)
    lnb_ab = _ln_beta(a, b)
    lo = 0.0
    hi = 1.0
    for it in range(1000):
        if not (lo < y and y < hi):
            y = 0.5 * (lo + hi)
        f = _inc_beta(y, 1.0 - y, a, b) - p
        if f == 0.0:
            return y
        if f < 0.0:
            lo = y
        else:
            hi = y
        if hi - lo <= 2.0 * EPS * hi:
            return y
        dens = exp((a - 1.0) * log(y) + (b - 1.0) * log1p(-y) - lnb_ab)
        if dens > 0.0 and isfinite(dens):
            u = f / dens
            corr = u * ((a - 1.0) / y - (b - 1.0) / (1.0 - y))
            ynew = y - u / (1.0 - 0.5 * (corr if corr < 1.0 else 1.0))
            if not (lo < ynew and ynew < hi):
                ynew = 0.5 * (lo + hi)
        else:
            ynew = 0.5 * (lo + hi)
        if fabs(ynew - y) <= 4.0 * EPS * y:
            return ynew
        y = ynew
    return y


cdef double _gamma_p_series(double s, double x, double lnfront) nogil:
    cdef double ap = s, total = 1.0 / s, delta
    cdef int i
    delta = total
    for i in range(100000):
        ap += 1.0
        delta *= x / ap
        total += delta
        if fabs(delta) < fabs(total) * EPS:
            break
    return total * exp(lnfront)


cdef double _gamma_q_cf_log(double s, double x, double lnfront) nogil:
    cdef double bb = x + 1.0 - s, c = 1.0 / FPMIN, d, h, an, delta
    cdef int i
    d = 1.0 / bb
    h = d
    for i in range(1, 100000):
        an = -i * (i - s)
        bb += 2.0
        d = an * d + bb
        if fabs(d) < FPMIN:
            d = FPMIN
        c = bb + an / c
        if fabs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if fabs(delta - 1.0) < EPS:
            break
    return lnfront + log(h)


cdef double _log_gamma_q(double s, double x) nogil:
    cdef double lnfront
    if x <= 0.0:
        return 0.0
    lnfront = -x + s * log(x) - _ln_gamma(s)
    if x < s + 1.0:
        return log1p(-_gamma_p_series(s, x, lnfront))
    return _gamma_q_cf_log(s, x, lnfront)


def ln_gamma(double x):
    return _ln_gamma(x)


def ln_beta(double a, double b):
    return _ln_beta(a, b)


def ln_gamma_shift(double z, double h):
    return _ln_gamma_shift(z, h)


def digamma(double x):
    return _digamma(x)


def trigamma(double x):
    return _trigamma(x)


def tetragamma(double x):
    return _tetragamma(x)


def log1mexp(double t):
    """log(1 - exp(-t)) for t > 0."""
    return _log1mexp(t)


def inc_beta(double y, double ym, double a, double b):
    """Regularized incomplete beta I_y(a, b); ``ym`` must equal 1 - y."""
    return _inc_beta(y, ym, a, b)


def inv_inc_beta(double p, double a, double b):
    """Solve I_y(a, b) = p for y by safeguarded Halley iteration."""
    return _inv_inc_beta(p, a, b)


def log_gamma_q(double s, double x):
    """log of the regularized upper incomplete gamma Q(s, x)."""
    return _log_gamma_q(s, x)


def gamma_q(double s, double x):
    return exp(_log_gamma_q(s, x))


def ln_gamma_vec(x):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xin = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(xin.shape[0])
    cdef Py_ssize_t i
    with nogil:
        for i in range(xin.shape[0]):
            out[i] = _ln_gamma(xin[i])
    return out.reshape(np.shape(x))


def inc_beta_vec(y, ym, double a, double b):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] yin = np.ascontiguousarray(y, dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ymin = np.ascontiguousarray(ym, dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(yin.shape[0])
    cdef Py_ssize_t i
    with nogil:
        for i in range(yin.shape[0]):
            out[i] = _inc_beta(yin[i], ymin[i], a, b)
    return out.reshape(np.shape(y))


def inv_inc_beta_vec(p, double a, double b):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] pin = np.ascontiguousarray(p, dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(pin.shape[0])
    cdef Py_ssize_t i
    with nogil:
        for i in range(pin.shape[0]):
            out[i] = _inv_inc_beta(pin[i], a, b)
    return out.reshape(np.shape(p))


def loglik_sum(double a, double b, double sigma, double lam, x):
    """Total log-density of the sample ``x`` under BF(a, b, sigma, lam)."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xs = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef Py_ssize_t i, n = xs.shape[0]
    cdef double total = 0.0, lsig = log(sigma), lx, logratio, t, term
    with nogil:
        for i in range(n):
            lx = log(xs[i])
            logratio = lsig - lx
            t = exp(lam * logratio)
            term = lam * logratio - lx - a * t
            if b != 1.0:
                term += (b - 1.0) * _log1mexp(t)
            total += term
    return n * (log(lam) - _ln_beta(a, b)) + total


def score_sum(double a, double b, double sigma, double lam, x):
    """Analytic gradient of :func:`loglik_sum` in (a, b, sigma, lam)."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xs = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef Py_ssize_t i, n = xs.shape[0]
    cdef double lsig = log(sigma), logratio, t, td
    cdef double st = 0.0, sl = 0.0, std = 0.0, slr = 0.0
    cdef double dab = _digamma(a + b)
    with nogil:
        for i in range(n):
            logratio = lsig - log(xs[i])
            t = exp(lam * logratio)
            td = t * (a - (b - 1.0) / expm1(t))
            st += t
            sl += _log1mexp(t)
            std += td
            slr += logratio * (1.0 - td)
    out = np.empty(4)
    out[0] = n * (dab - _digamma(a)) - st
    out[1] = n * (dab - _digamma(b)) + sl
    out[2] = (lam / sigma) * (n - std)
    out[3] = n / lam + slr
    return out


def power_ladder(alpha, double m):
    """Coefficients of (sum_l alpha_l z^l)^m given alpha_0 = 1."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] al = np.ascontiguousarray(alpha, dtype=np.float64).ravel()
    cdef Py_ssize_t size = al.shape[0], j, l
    cdef cnp.ndarray[cnp.float64_t, ndim=1] c = np.zeros(size)
    cdef double acc
    if size == 0:
        return c
    c[0] = 1.0
    with nogil:
        for j in range(1, size):
            acc = 0.0
            for l in range(1, j + 1):
                acc += ((m + 1.0) * l - j) * al[l] * c[j - l]
            c[j] = acc / j
    return c
