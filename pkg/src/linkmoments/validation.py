"""Input checks shared by the estimators and the functional API."""
from __future__ import annotations

import numbers

import numpy as np


def check_symmetric(matrix, *, exact: bool = True) -> np.ndarray:
    a = np.asarray(matrix, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains NaN or infinite entries")
    if exact:
        if not np.array_equal(a, a.T):
            raise ValueError("matrix is not exactly symmetric")
    elif not np.allclose(a, a.T):
        raise ValueError("matrix is not symmetric")
    return a


def check_matrix_stack(X) -> np.ndarray:
    """Accept one ``(N, N)`` matrix or a stack ``(m, N, N)``; return the stack."""
    a = np.asarray(X, dtype=np.float64)
    if a.ndim == 2:
        a = a[None]
    if a.ndim != 3 or a.shape[1] != a.shape[2]:
        raise ValueError(f"expected (N, N) or (m, N, N) array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("input contains NaN or infinite entries")
    if not np.array_equal(a, np.swapaxes(a, 1, 2)):
        raise ValueError("input matrices must be exactly symmetric")
    return a


def check_positive_int(value, name: str, minimum: int = 1) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def check_moment_orders(ks) -> tuple[int, ...]:
    out = tuple(int(k) for k in ks)
    if not out:
        raise ValueError("need at least one moment order")
    if any(k < 0 for k in out):
        raise ValueError("moment orders must be nonnegative")
    return out


def check_ladder(ns, minimum_points: int = 3) -> tuple[int, ...]:
    out = tuple(int(n) for n in ns)
    if len(out) < minimum_points:
        raise ValueError(f"need at least {minimum_points} sizes, got {len(out)}")
    if any(b <= a for a, b in zip(out, out[1:])):
        raise ValueError("sizes must be strictly increasing")
    return out
