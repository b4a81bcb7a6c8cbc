"""Random input sequences and matrix assembly.

Every draw is a pure function of ``(seed, trial, l_value)``: a keyed
64-bit mixer turns the triple into a uniform word, which is then mapped to
the requested distribution. Matrices are therefore identical whatever the
order in which trials or L-values are visited.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import ndtri

from .links import LinkFunction

__all__ = [
    "Distribution",
    "EnsembleConfig",
    "InputSequence",
    "derive_draw",
    "derive_draws",
    "build_matrix",
    "iter_matrices",
]

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1


class Distribution(str, enum.Enum):
    STANDARD_NORMAL = "standard_normal"
    RADEMACHER = "rademacher"

    @classmethod
    def parse(cls, value) -> "Distribution":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("-", "_")
        aliases = {"normal": cls.STANDARD_NORMAL, "gaussian": cls.STANDARD_NORMAL, "sign": cls.RADEMACHER}
        return aliases.get(key) or cls(key)


def _mix(z: np.ndarray) -> np.ndarray:
    # splitmix64 finalizer; uint64 arithmetic wraps mod 2**64
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def _key(seed: int, trial: int) -> np.uint64:
    with np.errstate(over="ignore"):
        k = _mix(np.uint64(seed & _MASK64) + _GOLDEN)
        k = _mix(k ^ (np.uint64(trial & _MASK64) * _GOLDEN + np.uint64(0x632BE59BD9B4E019)))
    return k


def _words(seed: int, trial: int, l_values: np.ndarray) -> np.ndarray:
    counters = np.asarray(l_values, dtype=np.int64).view(np.uint64)
    key = _key(seed, trial)
    with np.errstate(over="ignore"):
        return _mix(_mix(counters * _GOLDEN + key) ^ key)


def derive_draws(seed: int, trial: int, l_values, distribution=Distribution.STANDARD_NORMAL) -> np.ndarray:
    """Vectorized :func:`derive_draw` over an array of L-values."""
    dist = Distribution.parse(distribution)
    w = _words(seed, trial, np.atleast_1d(l_values))
    if dist is Distribution.RADEMACHER:
        return np.where(w >> np.uint64(63), 1.0, -1.0)
    # 53 high bits, centred so u is strictly inside (0, 1)
    u = ((w >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53
    return ndtri(u)


def derive_draw(seed: int, trial: int, l_value: int, distribution=Distribution.STANDARD_NORMAL) -> float:
    return float(derive_draws(seed, trial, np.array([l_value]), distribution)[0])


@dataclass(frozen=True)
class EnsembleConfig:
    link: LinkFunction
    n: int
    distribution: Distribution = Distribution.STANDARD_NORMAL
    seed: int = 0
    trials: int = 1

    def __post_init__(self):
        object.__setattr__(self, "distribution", Distribution.parse(self.distribution))
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"matrix size must be an integer >= 2, got {self.n}")
        if int(self.trials) != self.trials or self.trials < 1:
            raise ValueError(f"trials must be a positive integer, got {self.trials}")
        if not 0 <= int(self.seed) <= _MASK64:
            raise ValueError("seed must fit in 64 unsigned bits")


class InputSequence:
    """Lazily populated map from L-value to its draw for one matrix."""

    def __init__(self, seed: int, trial: int, distribution=Distribution.STANDARD_NORMAL):
        self.seed = seed
        self.trial = trial
        self.distribution = Distribution.parse(distribution)
        self.values: dict[int, float] = {}

    def __getitem__(self, l_value: int) -> float:
        try:
            return self.values[l_value]
        except KeyError:
            v = derive_draw(self.seed, self.trial, l_value, self.distribution)
            self.values[l_value] = v
            return v

    def __len__(self):
        return len(self.values)


@lru_cache(maxsize=16)
def _grid_structure(link: LinkFunction, n: int):
    grid = link.grid(n)
    uniq, inverse = np.unique(grid, return_inverse=True)
    return uniq, inverse.reshape(n, n)


def build_matrix(config: EnsembleConfig, trial: int) -> np.ndarray:
    """Matrix ``M[i, j] = a_{L(i+1, j+1)}`` for the given trial index."""
    if not 0 <= trial < config.trials:
        raise IndexError(f"trial {trial} outside 0..{config.trials - 1}")
    uniq, inverse = _grid_structure(config.link, config.n)
    draws = derive_draws(config.seed, trial, uniq, config.distribution)
    return draws[inverse]


def iter_matrices(config: EnsembleConfig):
    for t in range(config.trials):
        yield build_matrix(config, t)
