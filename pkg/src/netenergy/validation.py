"""Input validation helpers shared by all modules."""

import numbers

import numpy as np

from .exceptions import InvalidInputError


def as_square_matrix(A, name="A"):
    """Return ``A`` as a finite, float64, square 2-D array.

    Scalars and 1-element sequences are promoted to 1x1 matrices so that the
    scalar examples in the docstrings work without ceremony.
    """
    arr = np.asarray(A, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InvalidInputError(f"{name} must be a square matrix, got shape {arr.shape}")
    if arr.shape[0] < 1:
        raise InvalidInputError(f"{name} must have at least one row")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} has non-finite entries")
    return arr


def as_input_matrix(B, n, name="B"):
    """Return ``B`` as a finite float64 array with ``n`` rows.

    A 1-D vector of length ``n`` is read as a single input column.
    """
    arr = np.asarray(B, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    elif arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2 or arr.shape[0] != n:
        raise InvalidInputError(f"{name} must have {n} rows, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} has non-finite entries")
    return arr


def as_vector(x, n, name="x"):
    arr = np.asarray(x, dtype=float).reshape(-1)
    if arr.shape[0] != n:
        raise InvalidInputError(f"{name} must have length {n}, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} has non-finite entries")
    return arr


def check_symmetric(A, name="A", rtol=1e-10):
    """Raise unless ``A`` is symmetric to ``rtol`` relative to its Frobenius norm."""
    scale = max(np.linalg.norm(A), np.finfo(float).tiny)
    asym = np.linalg.norm(A - A.T)
    if asym > rtol * scale:
        raise InvalidInputError(
            f"{name} is not symmetric (|{name} - {name}^T| / |{name}| = {asym / scale:.3g})"
        )
    return 0.5 * (A + A.T)


def check_positive_time(t, name="t_f"):
    if not isinstance(t, numbers.Real) or not np.isfinite(t) or t <= 0:
        raise InvalidInputError(f"{name} must be a finite positive number, got {t!r}")
    return float(t)


def check_count(m, low, high, name="m"):
    if isinstance(m, bool) or not isinstance(m, numbers.Integral):
        raise InvalidInputError(f"{name} must be an integer, got {m!r}")
    if not low <= m <= high:
        raise InvalidInputError(f"{name}={m} outside [{low}, {high}]")
    return int(m)


def check_drivers(drivers, n):
    """Validate a list of distinct node indices in ``[0, n)``."""
    idx = np.asarray(drivers, dtype=int).reshape(-1)
    if idx.size and (idx.min() < 0 or idx.max() >= n):
        raise InvalidInputError(f"driver indices must lie in [0, {n})")
    if np.unique(idx).size != idx.size:
        raise InvalidInputError("driver indices must be distinct")
    return idx


def elementary_inputs(drivers, n):
    """Input matrix whose j-th column is the unit vector of ``drivers[j]``."""
    idx = check_drivers(drivers, n)
    B = np.zeros((n, idx.size))
    B[idx, np.arange(idx.size)] = 1.0
    return B


def default_axis_tol(A):
    """Default half-width of the band around the imaginary axis."""
    return 1e-9 * float(np.linalg.norm(A))
