"""Zone-case analysis for linear links.

For a word of length ``2k`` each edge ``(pi(t-1), pi(t))`` sits in Zone 1
(``pi(t-1) <= pi(t)``) or Zone 2. Fixing all zones turns every matched pair
of L-values into a linear equation in ``pi(0), ..., pi(2k-1)``. A zone case
contributes to the limiting moment only when the solution set keeps
``k + 1`` degrees of freedom carried by the generating vertices; its
contribution is then the volume of the region cut out of the unit cube by
the zone inequalities (after the substitution ``v = pi / N``).
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
import sympy

from .links import LinkFunction, Zone
from .words import PairWord, dihedral_classes

__all__ = [
    "CaseKind",
    "ZoneCase",
    "NonlinearLinkError",
    "zone_case_analysis",
    "all_zone_cases",
    "contribution_volume",
    "lattice_density",
    "moment_from_volumes",
    "adjacent_pairs",
]


class NonlinearLinkError(ValueError):
    pass


class CaseKind(str, enum.Enum):
    OBSTRUCTED = "obstructed"
    DEGREE_LOSS = "degree_loss"
    CONTRIBUTING = "contributing"


@dataclass(frozen=True)
class ZoneCase:
    word: PairWord
    link: LinkFunction
    zones: tuple[Zone, ...]
    kind: CaseKind
    rank: int
    rank_at_equal: int
    # vertex -> coefficients over the generating vertices (sorted order)
    solution: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def generating(self) -> tuple[int, ...]:
        return tuple(sorted(self.word.generating_vertices - {2 * self.word.k}))

    @property
    def contributing(self) -> bool:
        return self.kind is CaseKind.CONTRIBUTING

    def describe(self) -> str:
        z = "".join(str(int(x)) for x in self.zones)
        return f"{self.word}[{z}]"

    def expression(self, vertex: int) -> str:
        coeffs = self.solution[vertex]
        terms = [f"{c}*pi({g})" for g, c in zip(self.generating, coeffs) if c != 0]
        return " + ".join(terms).replace("+ -", "- ") or "0"


def _linear_coeffs(link: LinkFunction) -> tuple[int, int, int]:
    if len(link.p1) != 2 or len(link.p2) != 2:
        raise NonlinearLinkError(
            f"zone-case analysis needs degree-one polynomials; {link.label} is handled by count_circuits only"
        )
    return link.p1[0], link.p2[0], link.sign.factor


def _edge_form(a: int, b: int, s: int, zone: Zone) -> tuple[int, int]:
    """Coefficients of (pi(t-1), pi(t)) in the L-value of one edge."""
    if zone is Zone.ZONE1:
        return a, s * b
    return s * b, a


def _system(word: PairWord, zones, a: int, b: int, s: int):
    k2 = len(word)
    rows = []
    for first, second in word.pairs:
        row = [0] * k2
        for t, sgn in ((first, 1), (second, -1)):
            c_prev, c_cur = _edge_form(a, b, s, zones[t - 1])
            row[t - 1] += sgn * c_prev
            row[t % k2] += sgn * c_cur
        rows.append(row)
    return sympy.Matrix(rows)


def adjacent_pairs(word: PairWord) -> list[tuple[int, int]]:
    """Letters whose two edges share a vertex, as 1-based edge positions."""
    k2 = len(word)
    out = []
    for first, second in word.pairs:
        if second - first == 1 or (first == 1 and second == k2):
            out.append((first, second))
    return out


def zone_case_analysis(word: PairWord, link: LinkFunction, zones) -> ZoneCase:
    """Classify one zone assignment (one zone per edge, edges 1..2k)."""
    if not isinstance(word, PairWord):
        word = PairWord(tuple(word))
    zones = tuple(Zone(z) for z in zones)
    if len(zones) != len(word):
        raise ValueError(f"need {len(word)} zones, got {len(zones)}")
    if len(word) > 6:
        raise ValueError("zone-case analysis is limited to words of length <= 6")
    a, b, s = _linear_coeffs(link)
    return _analyse(word, a, b, s, zones, link)


@lru_cache(maxsize=8192)
def _analyse_cached(letters, a, b, s, zones):
    word = PairWord(letters)
    k, k2 = word.k, len(word)
    A = _system(word, zones, a, b, s)
    rank = A.rank()
    rank_eq = _system(word, zones, 1, 1, s).rank()
    dim = k2 - rank
    if dim < k + 1:
        kind = CaseKind.OBSTRUCTED if rank > rank_eq else CaseKind.DEGREE_LOSS
        return kind, rank, rank_eq, {}
    if dim > k + 1:
        raise ArithmeticError(f"solution space of {word} has dimension {dim} > k+1")
    gen = sorted(word.generating_vertices - {k2})
    nongen = [t for t in range(k2) if t not in gen]
    B = A[:, nongen]
    if B.rank() < len(nongen):
        return CaseKind.DEGREE_LOSS, rank, rank_eq, {}
    G = A[:, gen]
    # B x_nongen = -G x_gen, consistent because rank(A) = len(nongen)
    sol, params = B.gauss_jordan_solve(-G)
    if params.shape[0]:
        return CaseKind.DEGREE_LOSS, rank, rank_eq, {}
    solution = {
        t: tuple(Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1])) for c in sol.row(i))
        for i, t in enumerate(nongen)
    }
    return CaseKind.CONTRIBUTING, rank, rank_eq, solution


def _analyse(word, a, b, s, zones, link) -> ZoneCase:
    kind, rank, rank_eq, solution = _analyse_cached(word.letters, a, b, s, zones)
    return ZoneCase(word, link, zones, kind, rank, rank_eq, dict(solution))


def all_zone_cases(word: PairWord, link: LinkFunction) -> list[ZoneCase]:
    if not isinstance(word, PairWord):
        word = PairWord(tuple(word))
    a, b, s = _linear_coeffs(link)
    return [
        _analyse(word, a, b, s, zones, link)
        for zones in itertools.product((Zone.ZONE1, Zone.ZONE2), repeat=len(word))
    ]


def _vertex_values(case: ZoneCase, v_gen: np.ndarray) -> np.ndarray:
    """Columns ``v(0), ..., v(2k)`` from the generating columns."""
    k2 = len(case.word)
    m = v_gen.shape[0]
    out = np.empty((m, k2 + 1))
    for col, g in enumerate(case.generating):
        out[:, g] = v_gen[:, col]
    for t, coeffs in case.solution.items():
        out[:, t] = v_gen @ np.array([float(c) for c in coeffs])
    out[:, k2] = out[:, 0]
    return out


def contribution_volume(case: ZoneCase, samples: int = 1_000_000, seed: int = 0, batch: int = 250_000):
    """Monte Carlo volume of the zone region, as ``(mean, standard_error)``."""
    if not case.contributing:
        raise ValueError(f"zone case {case.describe()} is {case.kind.value}, not contributing")
    if samples < 1:
        raise ValueError("samples must be positive")
    rng = np.random.default_rng(seed)
    ng = len(case.generating)
    k2 = len(case.word)
    hits = 0
    done = 0
    while done < samples:
        m = min(batch, samples - done)
        # (0, 1]
        v_gen = 1.0 - rng.random((m, ng))
        v = _vertex_values(case, v_gen)
        ok = np.ones(m, dtype=bool)
        for t, coeffs in case.solution.items():
            ok &= (v[:, t] >= 0.0) & (v[:, t] <= 1.0)
        for t in range(1, k2 + 1):
            if case.zones[t - 1] is Zone.ZONE1:
                ok &= v[:, t - 1] <= v[:, t]
            else:
                ok &= v[:, t - 1] > v[:, t]
        hits += int(ok.sum())
        done += m
    p = hits / samples
    return p, math.sqrt(p * (1.0 - p) / samples)


def lattice_density(case: ZoneCase, max_cells: int = 2_000_000) -> Fraction:
    """Fraction of integer generating tuples whose solved indices are integers.

    The volume measures a continuum; only lattice points are circuits, so
    the count of a contributing case grows like
    ``lattice_density * volume * N^{k+1}``.
    """
    if not case.contributing:
        raise ValueError("lattice density is defined for contributing cases only")
    dens = [c.denominator for coeffs in case.solution.values() for c in coeffs]
    D = math.lcm(*dens) if dens else 1
    if D == 1:
        return Fraction(1)
    ng = len(case.generating)
    if D**ng > max_cells:
        raise ValueError(f"residue enumeration too large ({D}^{ng})")
    grid = np.stack(np.meshgrid(*[np.arange(D)] * ng, indexing="ij"), axis=-1).reshape(-1, ng)
    ok = np.ones(grid.shape[0], dtype=bool)
    for coeffs in case.solution.values():
        # integer numerators over the common denominator D
        num = np.array([int(c * D) for c in coeffs], dtype=np.int64)
        ok &= (grid @ num) % D == 0
    return Fraction(int(ok.sum()), grid.shape[0])


def moment_from_volumes(link: LinkFunction, two_k: int, samples: int = 200_000, seed: int = 0, lattice: bool = False):
    """Sum of contributing zone-case volumes over all words of length ``2k``.

    With ``lattice=False`` this is the continuum integral; ``lattice=True``
    weights each case by :func:`lattice_density`, which is what the finite-N
    circuit counts converge to. Returns ``(value, standard_error)``.
    """
    if two_k % 2 or not 2 <= two_k <= 6:
        raise ValueError("moment_from_volumes supports 2k in {2, 4, 6}")
    total = 0.0
    var = 0.0
    for i, (rep, members) in enumerate(sorted(dihedral_classes(two_k // 2).items())):
        for j, case in enumerate(all_zone_cases(rep, link)):
            if not case.contributing:
                continue
            p, se = contribution_volume(case, samples, seed=seed + 7919 * i + j)
            w = len(members) * (float(lattice_density(case)) if lattice else 1.0)
            total += w * p
            var += (w * se) ** 2
    return total, math.sqrt(var)
