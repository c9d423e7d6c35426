"""Argument checks shared by the public entry points."""

import math
import numbers

import numpy as np

from .errors import DataError, DomainError


def positive(name, value):
    """Return ``value`` as float after checking it is finite and > 0."""
    try:
        v = float(value)
    except (TypeError, ValueError):
        raise DomainError(f"{name} must be a real number, got {value!r}") from None
    if not math.isfinite(v) or v <= 0.0:
        raise DomainError(f"{name} must be finite and > 0, got {value!r}")
    return v


def finite(name, value):
    try:
        v = float(value)
    except (TypeError, ValueError):
        raise DomainError(f"{name} must be a real number, got {value!r}") from None
    if not math.isfinite(v):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return v


def unit_closed(name, value):
    v = finite(name, value)
    if not 0.0 <= v <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {value!r}")
    return v


def positive_int(name, value):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        if isinstance(value, float) and value.is_integer():
            value = int(value)
        else:
            raise DomainError(f"{name} must be a positive integer, got {value!r}")
    if value < 1:
        raise DomainError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def integer_valued(name, value):
    """Positive integer given as int or integral float."""
    v = positive(name, value)
    if not float(v).is_integer():
        raise DomainError(f"{name} must be a positive integer, got {value!r}")
    return int(v)


def is_integer(value):
    return float(value).is_integer()


def positive_array(name, x, error=DomainError):
    """Float array of strictly positive finite values."""
    arr = np.asarray(x, dtype=float)
    if arr.size and not (np.all(np.isfinite(arr)) and np.all(arr > 0.0)):
        raise error(f"{name} must contain only finite values > 0")
    return arr


def sample(x, min_size=1):
    """Validated one-dimensional data sample."""
    try:
        arr = np.asarray(x, dtype=float).ravel()
    except (TypeError, ValueError):
        raise DataError("data must be a sequence of real numbers") from None
    if arr.size < min_size:
        raise DataError(f"need at least {min_size} observations, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise DataError("data contain non-finite values")
    if np.any(arr <= 0.0):
        raise DataError("data must be strictly positive")
    return arr
