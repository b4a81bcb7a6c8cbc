"""Closed-form limiting moments and reference values.

Table values are kept as ``Fraction`` so comparisons against published
predictions are exact; callers convert to float at the edges.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .links import LinkFunction, LinkKind, Sign, _parse_kind
from .words import catalan_number

__all__ = [
    "MomentReport",
    "semicircle_moment",
    "analytic_moment",
    "lattice_corrected_moment",
    "predicted_moment",
    "moment_upper_bound",
    "quadratic_link_m4",
    "QUADRATIC_LINK",
]

_GENERALIZED = (LinkKind.GENERALIZED_TOEPLITZ, LinkKind.GENERALIZED_HANKEL)


def semicircle_moment(k: int) -> int:
    """``k``-th moment of the semicircle law: the Catalan number for even ``k``."""
    if k < 0:
        raise ValueError("moment order must be nonnegative")
    if k % 2:
        return 0
    return catalan_number(k)


def _ensemble_kind(ensemble) -> LinkKind:
    if isinstance(ensemble, LinkFunction):
        return ensemble.kind
    return _parse_kind(ensemble)


def _check_params(alpha, beta) -> tuple[int, int]:
    a, b = int(alpha), int(beta)
    if a != alpha or b != beta or a < 1 or b < 1:
        raise ValueError(f"alpha and beta must be positive integers, got {alpha}, {beta}")
    return a, b


def analytic_moment(ensemble, k: int, alpha: int = 1, beta: int = 1) -> Optional[Fraction]:
    """Published fourth/sixth moments of the generalized Toeplitz and Hankel ensembles.

    ``ensemble`` is a generalized ``LinkFunction`` (its own alpha and beta
    then win), a ``LinkKind``, or one of ``"T"``/``"H"``. Returns ``None``
    for even orders with no closed form.
    """
    try:
        kind = _ensemble_kind(ensemble)
    except ValueError:
        raise ValueError(f"unknown ensemble {ensemble!r}") from None
    if kind not in _GENERALIZED:
        raise ValueError(f"closed forms exist for generalized Toeplitz/Hankel only, not {kind.value}")
    if isinstance(ensemble, LinkFunction):
        alpha, beta = ensemble.alpha, ensemble.beta
    a, b = _check_params(alpha, beta)
    if k < 0:
        raise ValueError("moment order must be nonnegative")
    if k % 2:
        return Fraction(0)
    if k in (0, 2):
        return Fraction(1)
    toeplitz = kind is LinkKind.GENERALIZED_TOEPLITZ
    if k == 4:
        return Fraction(8, 3) if toeplitz and a == b else Fraction(2)
    if k == 6:
        if a == b:
            return Fraction(11) if toeplitz else Fraction(11, 2)
        if toeplitz:
            return 5 + Fraction(min(a, b), 2 * (a + b))
        return 5 + Fraction(a * b, 2 * (a + b) ** 2)
    return None


def lattice_corrected_moment(ensemble, k: int, alpha: int = 1, beta: int = 1) -> Optional[Fraction]:
    """Like :func:`analytic_moment`, with the sixth moment for ``alpha != beta``
    taken from the discrete circuit count rather than the continuum volume.

    In the abcabc zone cases the non-generating indices are rational
    combinations of the generating ones; only a fraction ``1/(a*b)`` of
    integer generating tuples (``a, b`` coprime) yields integer indices.
    Exact counts converge to ``5 + 1/(2 max(a,b) (a+b))`` (Toeplitz) and
    ``5 + 1/(2 (a+b)^2)`` (Hankel).
    """
    value = analytic_moment(ensemble, k, alpha, beta)
    if k != 6:
        return value
    if isinstance(ensemble, LinkFunction):
        alpha, beta = ensemble.alpha, ensemble.beta
    a, b = _check_params(alpha, beta)
    g = math.gcd(a, b)
    a, b = a // g, b // g
    if a == b:
        return value
    if _ensemble_kind(ensemble) is LinkKind.GENERALIZED_TOEPLITZ:
        return 5 + Fraction(1, 2 * max(a, b) * (a + b))
    return 5 + Fraction(1, 2 * (a + b) ** 2)


QUADRATIC_LINK = LinkFunction(LinkKind.GENERAL_BIVARIATE, p1=(1, 0, 0), p2=(1, 0, 0), sign=Sign.MINUS)


def quadratic_link_m4() -> float:
    """Fourth moment of the quadratic link ``i^2 - j^2`` (natural log)."""
    return 2.0 + (8.0 - math.pi + 2.0 * math.log(4.0)) / 12.0


def predicted_moment(link: LinkFunction, k: int):
    """Best available limiting value for a link, or ``None``.

    Generalized links use the published closed forms; polynomial
    Toeplitz/Hankel links (``deg p1 != deg p2``) have semicircle moments;
    the quadratic link has a known fourth moment.
    """
    if k % 2:
        return Fraction(0)
    if link.is_linear_family:
        return analytic_moment(link, k)
    if link.kind in (LinkKind.POLYNOMIAL_TOEPLITZ, LinkKind.POLYNOMIAL_HANKEL):
        return Fraction(semicircle_moment(k))
    if k in (0, 2):
        return Fraction(1)
    if k == 4 and link == QUADRATIC_LINK:
        return quadratic_link_m4()
    return None


def moment_upper_bound(two_k: int, delta: int) -> int:
    """``(2k)! / (2^k k!) * delta^k``: pair matchings times per-row multiplicity."""
    if two_k < 0 or two_k % 2:
        raise ValueError("the bound is stated for even orders")
    k = two_k // 2
    return math.factorial(two_k) // (2**k * math.factorial(k)) * delta**k


@dataclass
class MomentReport:
    """One moment order for one ensemble, gathered across the three routes."""

    link: LinkFunction
    k: int
    n: Optional[int] = None
    trials: Optional[int] = None
    empirical: Optional[tuple[float, float]] = None
    combinatorial: Optional[tuple[float, float]] = None
    analytic: object = None
    semicircle_ref: int = 0

    def __post_init__(self):
        self.semicircle_ref = semicircle_moment(self.k)
        if self.analytic is None:
            self.analytic = predicted_moment(self.link, self.k)

    @property
    def predicted(self) -> Optional[float]:
        if self.analytic is not None:
            return float(self.analytic)
        if self.combinatorial is not None:
            return self.combinatorial[0]
        return None

    @property
    def observed(self) -> Optional[float]:
        return None if self.empirical is None else self.empirical[0]

    @property
    def std_error(self) -> Optional[float]:
        return None if self.empirical is None else self.empirical[1]

    @property
    def ratio(self) -> Optional[float]:
        p, o = self.predicted, self.observed
        if p is None or o is None or p == 0:
            return None
        return o / p

    def to_dict(self) -> dict:
        return {
            "link": self.link.to_dict(),
            "k": self.k,
            "n": self.n,
            "trials": self.trials,
            "empirical": list(self.empirical) if self.empirical else None,
            "combinatorial": list(self.combinatorial) if self.combinatorial else None,
        }
