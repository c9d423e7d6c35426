"""Monte Carlo oracle for L-moments, independent of the package sampler."""

from functools import lru_cache

import numpy as np


def sample_lmoments(x):
    """Unbiased sample L-moments l1..l4 from probability-weighted moments."""
    x = np.sort(np.asarray(x, dtype=float))
    n = x.size
    j = np.arange(1, n + 1, dtype=float)
    b0 = x.mean()
    b1 = np.sum((j - 1) / (n - 1) * x) / n
    b2 = np.sum((j - 1) * (j - 2) / ((n - 1) * (n - 2)) * x) / n
    b3 = np.sum((j - 1) * (j - 2) * (j - 3) / ((n - 1) * (n - 2) * (n - 3)) * x) / n
    return np.array([b0, 2 * b1 - b0, 6 * b2 - 6 * b1 + b0, 20 * b3 - 30 * b2 + 12 * b1 - b0])


@lru_cache(maxsize=None)
def mc_lmoments(theta, size=1_000_000, batches=20, seed=12345):
    """Estimates and standard errors of l1..l4, tau3 and tau4.

    V is drawn by numpy's beta generator and mapped to
    ``sigma (-log V)**(-1/lam)``.  Standard errors come from the spread of
    ``batches`` equal sub-samples.
    """
    a, b, sigma, lam = theta
    rng = np.random.default_rng(seed)
    v = rng.beta(a, b, size)
    x = sigma * (-np.log(v)) ** (-1.0 / lam)
    per = np.array([sample_lmoments(chunk) for chunk in np.split(x, batches)])
    ratios = np.column_stack([per[:, 2] / per[:, 1], per[:, 3] / per[:, 1]])
    est = per.mean(axis=0)
    se = per.std(axis=0, ddof=1) / np.sqrt(batches)
    rat = ratios.mean(axis=0)
    rat_se = ratios.std(axis=0, ddof=1) / np.sqrt(batches)
    return est, se, rat, rat_se
