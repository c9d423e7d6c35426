"""Likelihood inference for the beta Frechet family.

Log-likelihood and analytic score, the T integrals behind the expected
information, the information matrix (closed form and a numeric
expectation oracle), maximum likelihood fits of the BF, EF (a = 1) and
Frechet (a = b = 1) models, Wald intervals and likelihood ratio tests.

T integrals are written on the scale ``u = -log V``, ``V ~ Beta(a, b)``:

    T_{ijkl} = E[V**i (1-V)**-j (-log V)**k (log(-log V))**l]
             = int exp(-(a+i) u) (1-e**-u)**(b-1-j) u**k (log u)**l du / B(a, b)

which is finite iff ``b - j + k > 0``.
"""

import math
from dataclasses import dataclass, field
from statistics import NormalDist

import numpy as np
from scipy import optimize
from scipy.optimize import brentq

from . import _validation as v
from ._backend import kernels as _k
from ._quad import beta_expectation, u_integral
from .distribution import BFParams, _as_params
from .errors import ConvergenceError, DivergenceError, DomainError, SingularMatrixError
from .specfun import chi2_logsf

__all__ = [
    "PARAM_NAMES",
    "MODELS",
    "loglik",
    "score",
    "score_terms",
    "expected_inverse_power",
    "TSpec",
    "t_integral",
    "InfoMatrix",
    "info_matrix_analytic",
    "info_matrix_numeric",
    "observed_info",
    "compare_information",
    "FitResult",
    "fit",
    "confidence_intervals",
    "LRTest",
    "lr_test",
]

PARAM_NAMES = ("a", "b", "sigma", "lam")
MODELS = {"BF": {}, "EF": {"a": 1.0}, "Frechet": {"a": 1.0, "b": 1.0}}
_MODEL_ALIASES = {"bf": "BF", "ef": "EF", "frechet": "Frechet"}

FIT_TOL = 1e-6
B_MAX = 1e6


def _model_name(model):
    name = _MODEL_ALIASES.get(str(model).lower())
    if name is None:
        raise DomainError(f"unknown model {model!r}; expected one of BF, EF, Frechet")
    return name


# ---------------------------------------------------------------- likelihood

def loglik(theta, data):
    """Log-likelihood of ``data`` under BF(theta), summed in log space.

    Raises
    ------
    DataError
        If any observation is non-positive or non-finite.
    """
    th = _as_params(theta)
    x = v.sample(data)
    return _k.loglik_sum(th.a, th.b, th.sigma, th.lam, x)


def score(theta, data):
    """Analytic gradient of :func:`loglik` with respect to (a, b, sigma, lam)."""
    th = _as_params(theta)
    x = v.sample(data)
    return np.asarray(_k.score_sum(th.a, th.b, th.sigma, th.lam, x))


def score_terms(theta, x):
    """Per-observation score contributions, shape ``(4, len(x))``."""
    th = _as_params(theta)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    a, b, s, lam = th.a, th.b, th.sigma, th.lam
    logratio = math.log(s) - np.log(x)
    t = np.exp(lam * logratio)
    dab = _k.digamma(a + b)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        # t / expm1(t) -> 1 as t -> 0 and -> 0 as t -> inf
        ratio = np.where(t > 0.0, t / np.expm1(t), 1.0)
        td = a * t - (b - 1.0) * ratio
        l1m = np.where(t > 1e-8, np.log(-np.expm1(-np.maximum(t, 1e-300))), np.log(t) - 0.5 * t)
    return np.vstack([
        dab - _k.digamma(a) - t,
        dab - _k.digamma(b) + l1m,
        (lam / s) * (1.0 - td),
        1.0 / lam + logratio * (1.0 - td),
    ])


def expected_inverse_power(theta):
    """``E X**-lam`` by quadrature; equals ``(psi(a+b) - psi(a)) / sigma**lam``."""
    th = _as_params(theta)
    return beta_expectation(None, th.a, th.b, alpha=1.0) / th.sigma ** th.lam


# ---------------------------------------------------------------- T integrals

@dataclass(frozen=True)
class TSpec:
    """Indices and shapes of ``T_{ijkl}(a, b)``."""

    i: int
    j: int
    k: int
    l: int
    a: float
    b: float

    def __post_init__(self):
        for name in ("i", "j", "k", "l"):
            val = getattr(self, name)
            if isinstance(val, bool) or not isinstance(val, (int, np.integer)) or val < 0:
                raise DomainError(f"{name} must be a nonnegative integer, got {val!r}")
        object.__setattr__(self, "a", v.positive("a", self.a))
        object.__setattr__(self, "b", v.positive("b", self.b))

    @property
    def finite(self):
        return self.b - self.j + self.k > 0.0


def t_integral(spec):
    """``T_{ijkl}(a, b)`` by QUADPACK on the u scale (absolute error <= 1e-9).

    Raises
    ------
    DivergenceError
        If ``b - j + k <= 0`` (non-integrable at V = 1).
    ConvergenceError
        If the quadrature error estimate exceeds 1e-9.
    """
    if not spec.finite:
        raise DivergenceError(
            f"T_{{{spec.i},{spec.j},{spec.k},{spec.l}}} diverges: needs b - j + k > 0, "
            f"got b={spec.b}")
    return u_integral(None, spec.a + spec.i, spec.b - spec.j, alpha=float(spec.k),
                      logpow=spec.l, log_scale=_k.ln_beta(spec.a, spec.b), tol_fail=1e-9)


# ---------------------------------------------------------------- information

@dataclass(frozen=True)
class InfoMatrix:
    """Unit (per observation) information, indexed by (a, b, sigma, lam).

    ``source`` is one of ``"analytic"``, ``"numeric"`` or ``"observed"``.
    """

    matrix: np.ndarray
    source: str

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.shape != (4, 4):
            raise DomainError("information matrix must be 4x4")
        if not np.allclose(m, m.T, rtol=1e-12, atol=1e-14):
            raise DomainError("information matrix must be symmetric")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def element(self, p, q):
        return float(self.matrix[PARAM_NAMES.index(p), PARAM_NAMES.index(q)])

    def is_positive_definite(self, free=None):
        idx = list(range(4)) if free is None else list(free)
        try:
            np.linalg.cholesky(self.matrix[np.ix_(idx, idx)])
        except np.linalg.LinAlgError:
            return False
        return True

    def covariance(self, n, free=None):
        """Inverse of ``n * K`` on the ``free`` indices (zero elsewhere).

        Raises
        ------
        SingularMatrixError
            If the free block is not positive definite.
        """
        idx = list(range(4)) if free is None else list(free)
        out = np.zeros((4, 4))
        if not idx:
            return out
        block = n * self.matrix[np.ix_(idx, idx)]
        try:
            chol = np.linalg.cholesky(block)
        except np.linalg.LinAlgError:
            raise SingularMatrixError("information matrix is not positive definite") from None
        inv_chol = np.linalg.inv(chol)
        out[np.ix_(idx, idx)] = inv_chol.T @ inv_chol
        return out


def info_matrix_analytic(theta, variant="corrected"):
    """Expected unit information from the closed-form elements.

    Parameters
    ----------
    variant : {"corrected", "uncorrected"}
        ``"uncorrected"`` assembles the (sigma, sigma) and (sigma, lam)
        elements in a widely circulated form that disagrees with the
        numeric expectation; ``"corrected"`` (default) uses

        ``k_ss = lam/s**2 [1 + (lam-1)(a d - (b-1) T1110) + lam (b-1) T1220]``
        ``k_sl = -1/s [1 - a(d + T0011) + (b-1)(T1110 + T1111 - T1221)]``

        with ``d = psi(a+b) - psi(a)``.  All other elements are shared.

    Raises
    ------
    DivergenceError
        Naming the element whose T integral is not finite.
    """
    th = _as_params(theta)
    if variant not in ("corrected", "uncorrected"):
        raise DomainError(f"unknown variant {variant!r}")
    a, b, s, lam = th.a, th.b, th.sigma, th.lam

    def T(i, j, k, l, element):
        if b == 1.0 and j > 0:
            return 0.0  # always multiplied by (b - 1)
        spec = TSpec(i, j, k, l, a, b)
        if not spec.finite:
            raise DivergenceError(f"element {element}: T_{{{i},{j},{k},{l}}} diverges for b={b}")
        return t_integral(spec)

    d = _k.digamma(a + b) - _k.digamma(a)
    tab = _k.trigamma(a + b)
    k_aa = _k.trigamma(a) - tab
    k_bb = _k.trigamma(b) - tab
    k_ab = -tab
    k_as = lam / s * d
    k_al = T(0, 0, 1, 1, "k_a,lam") / lam
    t1110 = T(1, 1, 1, 0, "k_b,sigma")
    t1111 = T(1, 1, 1, 1, "k_b,lam")
    k_bs = -lam / s * t1110
    k_bl = -t1111 / lam
    k_ll = (1.0 + a * T(0, 0, 1, 2, "k_lam,lam")
            + (b - 1.0) * (T(1, 2, 2, 2, "k_lam,lam") - T(1, 1, 1, 2, "k_lam,lam"))) / lam ** 2
    t0011 = k_al * lam
    if variant == "uncorrected":
        k_ss = lam / s ** 2 * (1.0 + a * (lam - 1.0) * d
                               + (b - 1.0) * (lam * T(1, 1, 2, 0, "k_sigma,sigma") - t1110))
        k_sl = -1.0 / s * (1.0 - a * (d + t0011)
                           + (b - 1.0) * (t1110 + t1111 - lam * T(1, 2, 2, 0, "k_sigma,lam")))
    else:
        k_ss = lam / s ** 2 * (1.0 + (lam - 1.0) * (a * d - (b - 1.0) * t1110)
                               + lam * (b - 1.0) * T(1, 2, 2, 0, "k_sigma,sigma"))
        k_sl = -1.0 / s * (1.0 - a * (d + t0011)
                           + (b - 1.0) * (t1110 + t1111 - T(1, 2, 2, 1, "k_sigma,lam")))
    m = np.array([[k_aa, k_ab, k_as, k_al],
                  [k_ab, k_bb, k_bs, k_bl],
                  [k_as, k_bs, k_ss, k_sl],
                  [k_al, k_bl, k_sl, k_ll]])
    return InfoMatrix(m, "analytic")


def info_matrix_numeric(theta, rel_step=1e-5):
    """Expected unit information ``-E[d score / d theta]`` by quadrature.

    Each score component is differentiated by central differences
    (step ``rel_step * theta_p``) and the expectation is taken on the u
    scale.  The result is symmetrized.
    """
    th = _as_params(theta)
    base = th.as_array()
    a, b, s, lam = th.a, th.b, th.sigma, th.lam
    m = np.zeros((4, 4))
    for p in range(4):
        h = rel_step * base[p]
        up = base.copy()
        dn = base.copy()
        up[p] += h
        dn[p] -= h
        th_up = BFParams.from_array(up)
        th_dn = BFParams.from_array(dn)

        def diff(u, q):
            x = s * u ** (-1.0 / lam)
            return float((score_terms(th_up, x)[q, 0] - score_terms(th_dn, x)[q, 0]) / (2.0 * h))

        for q in range(4):
            m[p, q] = -beta_expectation(lambda u, q=q: diff(u, q), a, b, tol_fail=1e-6,
                                        weighted=False)
    return InfoMatrix(0.5 * (m + m.T), "numeric")


def observed_info(theta, data, rel_step=1e-6):
    """Observed unit information: minus the Hessian of ``loglik / n``.

    Obtained by central differences of the analytic score; used for
    diagnostics only.
    """
    th = _as_params(theta)
    x = v.sample(data)
    base = th.as_array()
    h_mat = np.zeros((4, 4))
    for p in range(4):
        h = rel_step * base[p]
        up = base.copy()
        dn = base.copy()
        up[p] += h
        dn[p] -= h
        h_mat[p] = (score(up, x) - score(dn, x)) / (2.0 * h)
    h_mat = -0.5 * (h_mat + h_mat.T) / x.size
    return InfoMatrix(h_mat, "observed")


def compare_information(theta, variant="corrected", rtol=1e-4):
    """Element-wise check ``|analytic - numeric| <= rtol (1 + |numeric|)``.

    Returns
    -------
    dict
        ``analytic`` and ``numeric`` matrices, ``violations`` as a list of
        ``(name_p, name_q, analytic, numeric)`` for the upper triangle, and
        ``authoritative`` (the numeric matrix whenever a violation exists).
    """
    ana = info_matrix_analytic(theta, variant)
    num = info_matrix_numeric(theta)
    bad = []
    for p in range(4):
        for q in range(p, 4):
            x, y = ana.matrix[p, q], num.matrix[p, q]
            if abs(x - y) > rtol * (1.0 + abs(y)):
                bad.append((PARAM_NAMES[p], PARAM_NAMES[q], float(x), float(y)))
    return {"analytic": ana, "numeric": num, "violations": bad,
            "authoritative": num if bad else ana}


# ---------------------------------------------------------------- fitting

@dataclass(frozen=True)
class FitResult:
    """Outcome of :func:`fit`.

    ``converged`` means the projected score on the log scale has sup-norm
    at most ``FIT_TOL`` (coordinates held at the upper bound on b are
    excluded when the score pushes outward) and no restart did better.
    """

    theta: BFParams
    loglik: float
    info: InfoMatrix | None
    std_errors: tuple
    converged: bool
    iterations: int
    model: str
    n: int
    free: tuple
    at_bound: tuple = ()
    grad_norm: float = math.nan
    score_norm: float = math.nan
    restarts: tuple = field(default=(), repr=False)

    def covariance(self):
        if self.info is None:
            raise SingularMatrixError("no information matrix available")
        return self.info.covariance(self.n, [PARAM_NAMES.index(p) for p in self.free])


def _frechet_start(x):
    """(sigma, lam) matching the Frechet mean and variance to the sample.

    Falls back to the log-moments (``log X`` is Gumbel with standard
    deviation ``pi / (lam sqrt 6)``) when the sample is too heavy tailed
    for a finite-variance match.
    """
    mean = float(np.mean(x))
    var = float(np.var(x, ddof=1)) if x.size > 1 else 0.0
    cv2 = var / mean ** 2

    def gap(lam):
        g1 = math.gamma(1.0 - 1.0 / lam)
        g2 = math.gamma(1.0 - 2.0 / lam)
        return g2 / g1 ** 2 - 1.0 - cv2

    lam = None
    if cv2 > 0.0:
        try:
            lam = brentq(gap, 2.0 + 1e-6, 1e4)
        except ValueError:
            lam = None
    if lam is None:
        lx = np.log(x)
        sd = float(np.std(lx, ddof=1)) if x.size > 1 else 0.0
        lam = math.pi / (sd * math.sqrt(6.0)) if sd > 0 else 1.0
        sigma = math.exp(float(np.mean(lx)) - 0.5772156649015329 / lam)
        return sigma, lam
    return mean / math.gamma(1.0 - 1.0 / lam), lam


class _Objective:
    """Negative log-likelihood and its gradient in log-parameter space."""

    def __init__(self, x, fixed, free):
        self.x = x
        self.fixed = fixed
        self.free = free

    def theta(self, z):
        vals = dict(self.fixed)
        for name, zi in zip(self.free, z):
            vals[name] = math.exp(zi)
        return [vals[p] for p in PARAM_NAMES]

    def __call__(self, z):
        try:
            th = self.theta(z)
            val = -_k.loglik_sum(*th, self.x)
            g = -np.asarray(_k.score_sum(*th, self.x))
        except (ValueError, OverflowError, ZeroDivisionError):
            return 1e300, np.zeros(len(z))
        idx = [PARAM_NAMES.index(p) for p in self.free]
        with np.errstate(over="ignore", invalid="ignore"):
            grad = g[idx] * np.exp(z)
        if not (math.isfinite(val) and np.all(np.isfinite(grad))):
            return 1e300, np.zeros(len(z))
        return val, grad

    def value(self, z):
        try:
            val = -_k.loglik_sum(*self.theta(z), self.x)
        except (ValueError, OverflowError, ZeroDivisionError):
            return 1e300
        return val if math.isfinite(val) else 1e300


def _snap(z, upper, tol=1e-7):
    return np.where(z >= upper - tol, upper, z)


def _projected(grad, z, upper):
    out = grad.copy()
    held = (z >= upper - 1e-9) & (grad < 0.0)
    out[held] = 0.0
    return out, held


def _newton_polish(obj, z, upper, steps=8):
    """Damped Newton steps with a finite-difference Hessian of the gradient."""
    val, grad = obj(z)
    for _ in range(steps):
        pg, held = _projected(grad, z, upper)
        if np.max(np.abs(pg), initial=0.0) <= 0.1 * FIT_TOL:
            break
        act = ~held
        if not np.any(act):
            break
        hess = np.zeros((z.size, z.size))
        for p in range(z.size):
            e = np.zeros(z.size)
            e[p] = 1e-6
            hess[p] = (obj(z + e)[1] - obj(z - e)[1]) / 2e-6
        hess = 0.5 * (hess + hess.T)
        sub = hess[np.ix_(act, act)]
        try:
            step_act = np.linalg.solve(sub, -grad[act])
        except np.linalg.LinAlgError:
            break
        step = np.zeros(z.size)
        step[act] = step_act
        improved = False
        lam = 1.0
        for _ in range(30):
            trial = _snap(np.minimum(z + lam * step, upper), upper)
            tv, tg = obj(trial)
            # near the optimum the objective change sinks into rounding, so a
            # step that halves the gradient is also taken within that noise
            pg_trial = _projected(tg, trial, upper)[0]
            small_rise = tv <= val + 1e-9 * max(1.0, abs(val))
            if tv <= val + 1e-12 * abs(val) or (
                    small_rise and np.max(np.abs(pg_trial)) <= 0.5 * np.max(np.abs(pg))):
                z, val, grad = trial, tv, tg
                improved = True
                break
            lam *= 0.5
        if not improved:
            break
    return z, val, grad


def _single_fit(obj, z0, upper, maxiter, polish=True, simplex=True):
    if simplex:
        # the simplex only has to reach the basin; gradient steps finish
        scale = max(1.0, abs(obj.value(z0)))
        nm = optimize.minimize(obj.value, z0, method="Nelder-Mead",
                               options={"maxiter": maxiter, "xatol": 1e-6,
                                        "fatol": 1e-10 * scale, "adaptive": z0.size > 2})
        z, nm_fun, nm_nit = np.minimum(nm.x, upper), nm.fun, nm.nit
    else:
        z, nm_fun, nm_nit = np.minimum(z0, upper), obj.value(z0), 0
    bounds = [(None, u if math.isfinite(u) else None) for u in upper]
    qn = optimize.minimize(obj, z, jac=True, method="L-BFGS-B", bounds=bounds,
                           options={"maxiter": maxiter, "gtol": 1e-10, "ftol": 1e-15})
    z = qn.x if qn.fun <= nm_fun else z
    z = _snap(z, upper)
    if polish:
        z, val, grad = _newton_polish(obj, z, upper)
    else:
        val, grad = obj(z)
    pg, held = _projected(grad, z, upper)
    iters = int(nm_nit) + int(qn.nit)
    return z, -val, float(np.max(np.abs(pg), initial=0.0)), held, iters


def _profile_in_b(x, fix, free, z_start, b_max, maxiter):
    """Joint start from maximizing the profile likelihood over log b.

    For fixed b the remaining parameters are well determined, while
    jointly the likelihood can have a long curved ridge towards large b
    (there ``lam`` shrinks like ``1 / log b`` and ``log sigma`` grows
    faster than ``log b``).  The profile is traced on a log-spaced grid
    with warm starts, then refined by a bounded scalar search.
    """
    inner = tuple(p for p in free if p != "b")
    pos = free.index("b")
    z_other = np.delete(z_start, pos)
    grid = np.log(np.geomspace(1e-2, b_max, 25))
    start_at = int(np.argmin(np.abs(grid)))  # b = 1
    cache = {}

    def inner_fit(logb, z0, simplex=False):
        obj = _Objective(x, {**fix, "b": math.exp(logb)}, inner)
        if not inner:
            return np.zeros(0), -obj.value(np.zeros(0))
        z, ll, *_ = _single_fit(obj, z0, np.full(len(inner), math.inf), maxiter,
                                polish=False, simplex=simplex)
        return z, ll

    for order in (range(start_at, grid.size), range(start_at - 1, -1, -1)):
        z_prev = z_other
        for idx in order:
            z_prev, ll = inner_fit(grid[idx], z_prev, simplex=idx == start_at)
            cache[idx] = (z_prev, ll)
            if idx != start_at and idx + 1 in cache and ll < cache[idx + 1][1] - 50.0 \
                    and order.step < 0:
                break  # far down the decreasing side
    best = max(cache, key=lambda i: cache[i][1])
    z_best, ll_best = cache[best]
    logb_best = grid[best]
    lo = grid[max(best - 1, 0)]
    hi = grid[min(best + 1, grid.size - 1)]
    if hi > lo:
        warm = {"z": z_best}

        def neg_profile(logb):
            z, ll = inner_fit(logb, warm["z"])
            warm["z"] = z
            return -ll

        res = optimize.minimize_scalar(neg_profile, bounds=(lo, hi), method="bounded",
                                       options={"xatol": 1e-7})
        z_ref, ll_ref = inner_fit(res.x, z_best)
        if ll_ref > ll_best:
            z_best, logb_best = z_ref, res.x
    logb_best = min(logb_best, math.log(b_max))
    if logb_best > math.log(b_max) - 1e-5:
        logb_best = math.log(b_max)
    return np.insert(z_best, pos, logb_best)


def fit(data, model="BF", init=None, fixed=None, seed=0, restarts=3, b_max=B_MAX,
        maxiter=2000, with_info=True, extra_starts=()):
    """Maximum likelihood fit of the BF, EF or Frechet model.

    Optimizes in log-parameter space: Nelder-Mead, then L-BFGS-B with
    the analytic score, then damped Newton steps.  Starts from the
    Frechet moment match with ``a = b = 1``, from ``init`` and
    ``extra_starts`` if given, from ``restarts`` jittered copies of the
    first start (``Generator(Philox(seed))``, log-scale sd 0.5) and, when
    b is free, from the maximizer of the profile likelihood in b.

    Parameters
    ----------
    data : sequence of float
        At least 5 positive observations.
    model : {"BF", "EF", "Frechet"}
        EF fixes ``a = 1``; Frechet fixes ``a = b = 1``.
    fixed : dict, optional
        Further parameters held fixed, e.g. ``{"b": 125.0}``.
    b_max : float
        Upper bound on b.  On samples where the likelihood keeps rising
        as ``b -> inf`` the fit stops here and ``at_bound`` says so.

    Raises
    ------
    ConvergenceError
        If no restart meets the tolerance; ``.partial`` holds the best
        :class:`FitResult`.
    """
    x = v.sample(data, min_size=5)
    name = _model_name(model)
    fix = dict(MODELS[name])
    for key, val in (fixed or {}).items():
        if key not in PARAM_NAMES:
            raise DomainError(f"unknown parameter {key!r}")
        fix[key] = v.positive(key, val)
    b_max = v.positive("b_max", b_max)
    free = tuple(p for p in PARAM_NAMES if p not in fix)
    obj = _Objective(x, fix, free)
    upper = np.array([math.log(b_max) if p == "b" else math.inf for p in free])

    sigma0, lam0 = _frechet_start(x)
    first = {"a": 1.0, "b": 1.0, "sigma": sigma0, "lam": lam0}
    starts = [first]
    for th in ([init] if init is not None else []) + list(extra_starts):
        th = _as_params(th)
        starts.append({p: getattr(th, p) for p in PARAM_NAMES})
    z_first = np.log([first[p] for p in free])
    rng = np.random.Generator(np.random.Philox(seed))
    candidates = [np.minimum(np.log([s[p] for p in free]), upper) for s in starts]
    for _ in range(restarts):
        candidates.append(np.minimum(z_first + rng.normal(0.0, 0.5, size=z_first.size), upper))
    runs = []
    if free:
        for z0 in candidates:
            runs.append(_single_fit(obj, z0, upper, maxiter))
        if "b" in free:
            z0 = _profile_in_b(x, fix, free, z_first, b_max, maxiter)
            runs.append(_single_fit(obj, z0, upper, maxiter, simplex=False))
    else:
        runs.append((np.zeros(0), -obj.value(np.zeros(0)), 0.0, np.zeros(0, bool), 0))
    best = max(runs, key=lambda r: r[1])
    z, ll, gnorm, held, iters = best
    theta = BFParams(*obj.theta(z))
    raw_score = score(theta, x)
    free_idx = [PARAM_NAMES.index(p) for p in free]
    active = [i for i, h in zip(free_idx, held) if not h]
    score_norm = float(np.max(np.abs(raw_score[active]), initial=0.0))
    at_bound = tuple(p for p, h in zip(free, held) if h)

    info = None
    se = (math.nan,) * 4
    if with_info:
        try:
            info = info_matrix_analytic(theta)
        except (ConvergenceError, DivergenceError):
            info = None
        if info is not None:
            try:
                cov = info.covariance(x.size, free_idx)
                se = tuple(float(math.sqrt(max(cov[i, i], 0.0))) for i in range(4))
            except SingularMatrixError:
                pass
    result = FitResult(theta=theta, loglik=float(ll), info=info, std_errors=se,
                       converged=gnorm <= FIT_TOL, iterations=iters, model=name,
                       n=int(x.size), free=free, at_bound=at_bound, grad_norm=gnorm,
                       score_norm=score_norm, restarts=tuple(float(r[1]) for r in runs))
    if not result.converged:
        raise ConvergenceError(
            f"{name} fit did not converge (projected gradient {gnorm:.3g})", partial=result)
    return result


def confidence_intervals(fit_result, gamma=0.05):
    """Wald intervals ``theta_i -+ z_{gamma/2} sqrt([(n K)^-1]_ii)``.

    ``gamma`` is the significance level: 0.05 gives 95% intervals and
    ``gamma = 1`` gives zero-width intervals.  Parameters held fixed by
    the model get zero-width intervals.

    Raises
    ------
    SingularMatrixError
        If the information matrix of the free parameters is singular.
    """
    if not fit_result.converged:
        raise ConvergenceError("confidence intervals need a converged fit")
    gamma = v.finite("gamma", gamma)
    if not 0.0 < gamma <= 1.0:
        raise DomainError("gamma must lie in (0, 1]")
    z = NormalDist().inv_cdf(1.0 - gamma / 2.0)
    cov = fit_result.covariance()
    est = fit_result.theta.as_array()
    half = z * np.sqrt(np.clip(np.diag(cov), 0.0, None))
    return [(float(e - h), float(e + h)) for e, h in zip(est, half)]


# ---------------------------------------------------------------- LR tests

@dataclass(frozen=True)
class LRTest:
    """Likelihood ratio test of a nested null model against BF."""

    statistic: float
    df: int
    p_value: float
    null_model: str
    alt_loglik: float
    null_loglik: float
    log_p_value: float = math.nan


def lr_from_logliks(alt_loglik, null_loglik, null_model):
    """LR statistic and chi-square p-value from two maximized log-likelihoods.

    ``df`` is 2 for the Frechet null and 1 for the EF null.  Differences
    down to -1e-8 are clamped to 0.
    """
    name = _model_name(null_model)
    if name == "BF":
        raise DomainError("the null model must be EF or Frechet")
    df = 2 if name == "Frechet" else 1
    w = 2.0 * (alt_loglik - null_loglik)
    if w < -1e-8:
        raise ConvergenceError(f"alternative fit is worse than the null (w = {w:.3g})")
    w = max(w, 0.0)
    logp = chi2_logsf(w, df)
    return LRTest(statistic=w, df=df, p_value=math.exp(logp), null_model=name,
                  alt_loglik=float(alt_loglik), null_loglik=float(null_loglik),
                  log_p_value=logp)


def lr_test(data, null_model="Frechet", seed=0, alt_fit=None, null_fit=None, **fit_kw):
    """Likelihood ratio test ``H0: null_model`` against ``H1: BF``.

    The BF fit is also started from the null estimate, so its maximum is
    never below the null's.
    """
    name = _model_name(null_model)
    if name == "BF":
        raise DomainError("the null model must be EF or Frechet")
    nf = null_fit or fit(data, name, seed=seed, with_info=False, **fit_kw)
    af = alt_fit or fit(data, "BF", seed=seed, with_info=False,
                        extra_starts=(nf.theta,), **fit_kw)
    return lr_from_logliks(af.loglik, nf.loglik, name)
