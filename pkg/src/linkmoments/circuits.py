"""Exact finite-N circuit counts and their N -> infinity extrapolation.

``count_circuits`` counts maps ``pi: {0..2k} -> {1..n}`` with
``pi(0) = pi(2k)`` whose L-values realize the word exactly: equal letters
carry equal L-values and distinct letters carry distinct ones. Generating
vertices range over all of ``1..n``; every other vertex only visits the
columns of its predecessor's row holding the required L-value.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numba as nb
import numpy as np

from .links import LinkFunction
from .validation import check_ladder
from .words import PairWord, dihedral_classes

__all__ = [
    "CircuitCount",
    "Extrapolation",
    "CountLimitError",
    "FitError",
    "SIZE_LIMITS",
    "count_circuits",
    "limiting_contribution",
    "moment_from_words",
    "word_contributions",
    "fit_extrapolation",
    "DEFAULT_LADDERS",
]

# largest n per half-length k; chosen so one count stays within a few seconds
SIZE_LIMITS = {1: 1024, 2: 512, 3: 128, 4: 32, 5: 16, 6: 10}
_TABLE_CELLS = 60_000_000


class CountLimitError(ValueError):
    pass


class FitError(ValueError):
    pass


@dataclass(frozen=True)
class CircuitCount:
    word: PairWord
    link: LinkFunction
    n: int
    count: int

    @property
    def normalized(self) -> float:
        return self.count / self.n ** (self.word.k + 1)


@nb.njit(cache=True)
def _dfs_count(grid, scols, letters, is_gen, use_table, start, cnt, vmin, svals):
    n = grid.shape[0]
    two_k = letters.shape[0]
    last = two_k - 1
    pi = np.zeros(two_k + 1, dtype=np.int64)
    val = np.zeros(two_k, dtype=np.int64)
    cur = np.zeros(two_k + 1, dtype=np.int64)
    hi = np.zeros(two_k + 1, dtype=np.int64)
    total = 0
    close_letter = letters[last]
    for p0 in range(n):
        pi[0] = p0
        if last == 0:
            total += 1
            continue
        t = 1
        cur[1] = 0
        hi[1] = n
        while t >= 1:
            if is_gen[t - 1]:
                m = cur[t]
                if m >= n:
                    t -= 1
                    continue
                cur[t] = m + 1
                v = grid[pi[t - 1], m]
                lt = letters[t - 1]
                clash = False
                for x in range(lt):
                    if val[x] == v:
                        clash = True
                        break
                if clash:
                    continue
                val[lt] = v
                pi[t] = m
            else:
                idx = cur[t]
                if idx >= hi[t]:
                    t -= 1
                    continue
                cur[t] = idx + 1
                pi[t] = scols[pi[t - 1], idx]
            if t == last:
                if grid[pi[t], p0] == val[close_letter]:
                    total += 1
                continue
            t += 1
            if is_gen[t - 1]:
                cur[t] = 0
                hi[t] = n
            else:
                target = val[letters[t - 1]]
                row = pi[t - 1]
                if use_table:
                    off = target - vmin
                    if off < 0 or off >= start.shape[1]:
                        cur[t] = 0
                        hi[t] = 0
                    else:
                        cur[t] = start[row, off]
                        hi[t] = start[row, off] + cnt[row, off]
                else:
                    lo = np.searchsorted(svals[row], target, side="left")
                    up = np.searchsorted(svals[row], target, side="right")
                    cur[t] = lo
                    hi[t] = up
    return total


@lru_cache(maxsize=8)
def _prepared(link: LinkFunction, n: int):
    grid = link.grid(n)
    order = np.argsort(grid, axis=1, kind="stable")
    svals = np.take_along_axis(grid, order, axis=1)
    scols = order.astype(np.int64)
    vmin, vmax = int(grid.min()), int(grid.max())
    span = vmax - vmin + 1
    if n * span <= _TABLE_CELLS:
        start = np.zeros((n, span), dtype=np.int32)
        cnt = np.zeros((n, span), dtype=np.int32)
        rows = np.repeat(np.arange(n), n)
        offs = (svals - vmin).ravel()
        np.add.at(cnt, (rows, offs), 1)
        # first sorted position of each value within its row
        pos = np.tile(np.arange(n), n)
        start_flat = np.full(n * span, n, dtype=np.int64)
        np.minimum.at(start_flat, rows * span + offs, pos)
        start = np.minimum(start_flat.reshape(n, span), n).astype(np.int32)
        use_table = True
    else:
        start = np.zeros((1, 1), dtype=np.int32)
        cnt = np.zeros((1, 1), dtype=np.int32)
        use_table = False
    return grid, scols, svals, use_table, start, cnt, vmin


def count_circuits(word: PairWord, link: LinkFunction, n: int, *, enforce_limits: bool = True) -> CircuitCount:
    """Exact ``#Pi(w)`` at size ``n``."""
    if not isinstance(word, PairWord):
        word = PairWord(tuple(word))
    if n < 1:
        raise ValueError("n must be positive")
    limit = SIZE_LIMITS.get(word.k, 0)
    if enforce_limits and n > limit:
        raise CountLimitError(f"n={n} exceeds the counting limit {limit} for words of length {2 * word.k}")
    return CircuitCount(word, link, n, _count(word, link.reduced(), n))


@lru_cache(maxsize=4096)
def _count(word: PairWord, link: LinkFunction, n: int) -> int:
    grid, scols, svals, use_table, start, cnt, vmin = _prepared(link, n)
    letters = np.asarray(word.letters, dtype=np.int64)
    gen = word.generating_vertices
    is_gen = np.array([t in gen for t in range(1, 2 * word.k + 1)], dtype=np.bool_)
    return int(_dfs_count(grid, scols, letters, is_gen, use_table, start, cnt, vmin, svals))


@dataclass(frozen=True)
class Extrapolation:
    """Least-squares fit of ``count / n^{k+1}`` as a polynomial in ``1/n``."""

    value: float
    uncertainty: float
    coefficients: tuple
    ns: tuple
    normalized: tuple
    residual_rms: float
    stderr: float
    shift: float
    model_error: float

    def __iter__(self):
        yield self.value
        yield self.uncertainty

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1


def _lstsq(ns, ys, degree):
    x = 1.0 / np.asarray(ns, dtype=float)
    A = np.vander(x, degree + 1, increasing=True)
    coef, *_ = np.linalg.lstsq(A, ys, rcond=None)
    if not np.all(np.isfinite(coef)):
        raise FitError("extrapolation fit is degenerate")
    return A, coef


def fit_extrapolation(ns, ys, degree: int = 2) -> Extrapolation:
    """Fit ``c0 + c1/n + ... + c_d/n^d`` and read off ``c0``.

    The uncertainty is the largest of the residual-based standard error of
    ``c0``, the change in ``c0`` when the smallest size is dropped, and (for
    ``degree >= 2``) the change when the highest-order term is removed.
    """
    ns = tuple(int(n) for n in ns)
    y = np.asarray(ys, dtype=float)
    if len(ns) < degree + 2:
        raise FitError(f"a degree-{degree} fit needs at least {degree + 2} sizes, got {len(ns)}")
    A, coef = _lstsq(ns, y, degree)
    resid = y - A @ coef
    dof = len(y) - (degree + 1)
    s2 = float(resid @ resid) / dof
    try:
        cov = s2 * np.linalg.inv(A.T @ A)
    except np.linalg.LinAlgError as exc:
        raise FitError("extrapolation fit is degenerate") from exc
    stderr = float(np.sqrt(max(cov[0, 0], 0.0)))
    _, coef_drop = _lstsq(ns[1:], y[1:], degree)
    shift = abs(float(coef_drop[0] - coef[0]))
    model = 0.0
    if degree >= 2:
        _, coef_low = _lstsq(ns, y, degree - 1)
        model = abs(float(coef_low[0] - coef[0]))
    return Extrapolation(
        value=float(coef[0]),
        uncertainty=max(stderr, shift, model),
        coefficients=tuple(float(c) for c in coef),
        ns=ns,
        normalized=tuple(float(v) for v in y),
        residual_rms=float(np.sqrt(np.mean(resid**2))),
        stderr=stderr,
        shift=shift,
        model_error=model,
    )


DEFAULT_LADDERS = {
    1: (64, 96, 128, 192, 256),
    2: (32, 48, 64, 96, 128, 192, 256),
    3: (24, 32, 48, 64, 96),
}


def limiting_contribution(word: PairWord, link: LinkFunction, n_ladder=None, degree: int = 2) -> Extrapolation:
    """Extrapolate ``#Pi(w) / n^{k+1}`` to ``n -> infinity``.

    ``degree=1`` is the plain ``c0 + c1/n`` model; the default adds a
    ``1/n^2`` term, which removes most of the small-n bias.
    """
    if not isinstance(word, PairWord):
        word = PairWord(tuple(word))
    if n_ladder is None:
        n_ladder = DEFAULT_LADDERS.get(word.k)
        if n_ladder is None:
            raise FitError(f"no default size ladder for words of length {2 * word.k}")
    try:
        ns = check_ladder(n_ladder)
    except ValueError as exc:
        raise FitError(str(exc)) from exc
    ys = [count_circuits(word, link, n).normalized for n in ns]
    return fit_extrapolation(ns, ys, degree)


def word_contributions(link: LinkFunction, two_k: int, n_ladder=None, degree: int = 2) -> list[tuple[PairWord, int, Extrapolation]]:
    """``(representative, multiplicity, extrapolation)`` per rotation/reversal class."""
    if two_k % 2 or two_k < 2:
        raise ValueError("word length must be a positive even number")
    out = []
    for rep, members in sorted(dihedral_classes(two_k // 2).items()):
        out.append((rep, len(members), limiting_contribution(rep, link, n_ladder, degree)))
    return out


def moment_from_words(link: LinkFunction, two_k: int, n_ladder=None, degree: int = 2) -> tuple[float, float]:
    """Limiting moment as a sum of extrapolated word contributions.

    Returns ``(value, uncertainty)``; class uncertainties are added linearly
    since all of them share the same size ladder.
    """
    if two_k not in (2, 4, 6):
        raise ValueError("moment_from_words supports 2k in {2, 4, 6}")
    value = 0.0
    unc = 0.0
    for _, mult, ext in word_contributions(link, two_k, n_ladder, degree):
        value += mult * ext.value
        unc += mult * ext.uncertainty
    return value, unc

