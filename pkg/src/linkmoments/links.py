"""Integer-valued bivariate link functions.

Every link splits the index grid into two zones. Zone 1 is the upper
triangle including the diagonal (``i <= j``); Zone 2 is the strict lower
triangle. With polynomials ``p1`` and ``p2`` and a sign ``s``::

    L(i, j) = p1(i) + s * p2(j)    if i <= j
    L(i, j) = s * p2(i) + p1(j)    if i > j

which is symmetric by construction. The generalized Toeplitz/Hankel links
are the degree-one cases ``p1 = alpha*x`` and ``p2 = beta*x``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

__all__ = [
    "parse_link",
    "LinkKind",
    "Sign",
    "Zone",
    "LinkFunction",
    "generalized_toeplitz",
    "generalized_hankel",
    "polynomial_toeplitz",
    "polynomial_hankel",
    "zone",
    "delta_L",
    "monotonicity_radius",
    "poly_eval",
]

INT64_SAFE = 2**62


class LinkKind(str, enum.Enum):
    GENERALIZED_TOEPLITZ = "generalized_toeplitz"
    GENERALIZED_HANKEL = "generalized_hankel"
    POLYNOMIAL_TOEPLITZ = "polynomial_toeplitz"
    POLYNOMIAL_HANKEL = "polynomial_hankel"
    GENERAL_BIVARIATE = "general_bivariate"


class Sign(str, enum.Enum):
    MINUS = "minus"
    PLUS = "plus"

    @property
    def factor(self) -> int:
        return -1 if self is Sign.MINUS else 1


class Zone(enum.IntEnum):
    ZONE1 = 1
    ZONE2 = 2


_KIND_ALIASES = {
    "toeplitz": LinkKind.GENERALIZED_TOEPLITZ,
    "t": LinkKind.GENERALIZED_TOEPLITZ,
    "hankel": LinkKind.GENERALIZED_HANKEL,
    "h": LinkKind.GENERALIZED_HANKEL,
    "pt": LinkKind.POLYNOMIAL_TOEPLITZ,
    "ph": LinkKind.POLYNOMIAL_HANKEL,
    "general": LinkKind.GENERAL_BIVARIATE,
}


def _parse_kind(kind) -> LinkKind:
    if isinstance(kind, LinkKind):
        return kind
    key = str(kind).strip().lower().replace("-", "_").replace(" ", "_")
    if key in _KIND_ALIASES:
        return _KIND_ALIASES[key]
    return LinkKind(key)


def _trim(coeffs: Sequence[int]) -> tuple[int, ...]:
    out = [int(c) for c in coeffs]
    for c, orig in zip(out, coeffs):
        if c != orig:
            raise ValueError(f"non-integer polynomial coefficient {orig!r}")
    while len(out) > 1 and out[0] == 0:
        out.pop(0)
    return tuple(out)


def poly_eval(coeffs: Sequence[int], x: int) -> int:
    """Horner evaluation in exact integer arithmetic (highest degree first)."""
    acc = 0
    for c in coeffs:
        acc = acc * x + c
    return acc


def _degree(coeffs: Sequence[int]) -> int:
    return len(coeffs) - 1


@dataclass(frozen=True)
class LinkFunction:
    """A symmetric integer link ``(i, j) -> L(i, j)`` on 1-based indices.

    Use the module-level constructors or :meth:`from_dict` rather than
    filling the polynomial fields by hand for the generalized kinds.
    """

    kind: LinkKind
    alpha: int = 1
    beta: int = 1
    p1: tuple[int, ...] = field(default=())
    p2: tuple[int, ...] = field(default=())
    sign: Sign = Sign.MINUS

    def __post_init__(self):
        kind = _parse_kind(self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "sign", Sign(self.sign))
        if kind in (LinkKind.GENERALIZED_TOEPLITZ, LinkKind.GENERALIZED_HANKEL):
            a, b = int(self.alpha), int(self.beta)
            if a < 1 or b < 1 or a != self.alpha or b != self.beta:
                raise ValueError(f"alpha and beta must be positive integers, got {self.alpha}, {self.beta}")
            object.__setattr__(self, "alpha", a)
            object.__setattr__(self, "beta", b)
            object.__setattr__(self, "p1", (a, 0))
            object.__setattr__(self, "p2", (b, 0))
            sign = Sign.MINUS if kind is LinkKind.GENERALIZED_TOEPLITZ else Sign.PLUS
            object.__setattr__(self, "sign", sign)
            return

        p1, p2 = _trim(self.p1), _trim(self.p2)
        if not p1 or not p2:
            raise ValueError("polynomial links need both p1 and p2")
        if _degree(p1) < 1 or _degree(p2) < 1:
            raise ValueError("constant polynomials violate Property B")
        object.__setattr__(self, "p1", p1)
        object.__setattr__(self, "p2", p2)
        if kind is LinkKind.POLYNOMIAL_TOEPLITZ:
            object.__setattr__(self, "sign", Sign.MINUS)
        elif kind is LinkKind.POLYNOMIAL_HANKEL:
            object.__setattr__(self, "sign", Sign.PLUS)
        if kind in (LinkKind.POLYNOMIAL_TOEPLITZ, LinkKind.POLYNOMIAL_HANKEL):
            if _degree(p1) == _degree(p2):
                raise ValueError("polynomial Toeplitz/Hankel links need deg(p1) != deg(p2)")

    # -- construction -------------------------------------------------
    @classmethod
    def from_dict(cls, spec: dict) -> "LinkFunction":
        kind = _parse_kind(spec["kind"])
        if kind in (LinkKind.GENERALIZED_TOEPLITZ, LinkKind.GENERALIZED_HANKEL):
            return cls(kind, alpha=spec.get("alpha", 1), beta=spec.get("beta", 1))
        return cls(
            kind,
            p1=tuple(spec["p1"]),
            p2=tuple(spec["p2"]),
            sign=Sign(spec.get("sign", "minus")),
        )

    def to_dict(self) -> dict:
        if self.is_linear_family:
            return {"kind": self.kind.value, "alpha": self.alpha, "beta": self.beta}
        return {
            "kind": self.kind.value,
            "p1": list(self.p1),
            "p2": list(self.p2),
            "sign": self.sign.value,
        }

    @property
    def is_linear_family(self) -> bool:
        return self.kind in (LinkKind.GENERALIZED_TOEPLITZ, LinkKind.GENERALIZED_HANKEL)

    def reduced(self) -> "LinkFunction":
        """Generalized link with ``alpha`` and ``beta`` divided by their gcd.

        Scaling a link does not change which positions share a draw, so the
        reduced link has the same matching structure.
        """
        if not self.is_linear_family:
            return self
        g = math.gcd(self.alpha, self.beta)
        return LinkFunction(self.kind, alpha=self.alpha // g, beta=self.beta // g)

    @property
    def is_linear(self) -> bool:
        """True when both polynomials are ``c*x`` (no constant term)."""
        return (
            len(self.p1) == 2 and len(self.p2) == 2 and self.p1[1] == 0 and self.p2[1] == 0
        )

    @property
    def label(self) -> str:
        if self.is_linear_family:
            tag = "T" if self.kind is LinkKind.GENERALIZED_TOEPLITZ else "H"
            return f"{tag}({self.alpha},{self.beta})"
        tag = {
            LinkKind.POLYNOMIAL_TOEPLITZ: "PT",
            LinkKind.POLYNOMIAL_HANKEL: "PH",
        }.get(self.kind, "G" + ("-" if self.sign is Sign.MINUS else "+"))
        return f"{tag}[{_poly_str(self.p1)};{_poly_str(self.p2)}]"

    # -- evaluation ---------------------------------------------------
    def __call__(self, i: int, j: int) -> int:
        return self.eval(i, j)

    def eval(self, i: int, j: int) -> int:
        if i < 1 or j < 1:
            raise ValueError(f"indices are 1-based, got ({i}, {j})")
        s = self.sign.factor
        if i <= j:
            return poly_eval(self.p1, i) + s * poly_eval(self.p2, j)
        return s * poly_eval(self.p2, i) + poly_eval(self.p1, j)

    def value_bound(self, n: int) -> int:
        """Upper bound on ``|L(i, j)|`` over ``1 <= i, j <= n``."""
        b1 = sum(abs(c) * n ** (len(self.p1) - 1 - k) for k, c in enumerate(self.p1))
        b2 = sum(abs(c) * n ** (len(self.p2) - 1 - k) for k, c in enumerate(self.p2))
        return b1 + b2

    def grid(self, n: int) -> np.ndarray:
        """The ``n x n`` int64 array of L-values (0-based positions, 1-based indices).

        Raises OverflowError when values could leave the int64 range rather
        than letting them wrap.
        """
        if n < 1:
            raise ValueError("n must be positive")
        if self.value_bound(n) >= INT64_SAFE:
            raise OverflowError(
                f"link {self.label} exceeds 64-bit range at n={n} "
                f"(|L| may reach {self.value_bound(n)})"
            )
        x = np.arange(1, n + 1, dtype=np.int64)
        q1 = _poly_vec(self.p1, x)
        q2 = _poly_vec(self.p2, x)
        s = self.sign.factor
        upper = q1[:, None] + s * q2[None, :]
        lower = s * q2[:, None] + q1[None, :]
        i, j = np.indices((n, n))
        return np.where(i <= j, upper, lower)


def _poly_vec(coeffs, x: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(x)
    for c in coeffs:
        acc = acc * x + c
    return acc


def _poly_str(coeffs) -> str:
    deg = len(coeffs) - 1
    terms = []
    for k, c in enumerate(coeffs):
        p = deg - k
        if c == 0:
            continue
        mono = "" if p == 0 else ("x" if p == 1 else f"x^{p}")
        coef = str(c) if (abs(c) != 1 or p == 0) else ("-" if c < 0 else "")
        terms.append(coef + mono)
    return "+".join(terms).replace("+-", "-") or "0"


def generalized_toeplitz(alpha: int = 1, beta: int = 1) -> LinkFunction:
    return LinkFunction(LinkKind.GENERALIZED_TOEPLITZ, alpha=alpha, beta=beta)


def generalized_hankel(alpha: int = 1, beta: int = 1) -> LinkFunction:
    return LinkFunction(LinkKind.GENERALIZED_HANKEL, alpha=alpha, beta=beta)


def polynomial_toeplitz(p1: Sequence[int], p2: Sequence[int]) -> LinkFunction:
    return LinkFunction(LinkKind.POLYNOMIAL_TOEPLITZ, p1=tuple(p1), p2=tuple(p2))


def polynomial_hankel(p1: Sequence[int], p2: Sequence[int]) -> LinkFunction:
    return LinkFunction(LinkKind.POLYNOMIAL_HANKEL, p1=tuple(p1), p2=tuple(p2))


def zone(i: int, j: int) -> Zone:
    if i < 1 or j < 1:
        raise ValueError(f"indices are 1-based, got ({i}, {j})")
    return Zone.ZONE1 if i <= j else Zone.ZONE2


def delta_L(link: LinkFunction, n: int) -> int:
    """Largest number of repeats of one L-value within a single row, brute force."""
    if n < 1:
        raise ValueError("n must be positive")
    g = link.grid(n)
    best = 0
    for row in g:
        _, counts = np.unique(row, return_counts=True)
        best = max(best, int(counts.max()))
    return best


def _cauchy_derivative_bound(coeffs: Sequence[int]) -> Fraction:
    coeffs = _trim(coeffs)
    m = _degree(coeffs)
    if m < 1:
        raise ValueError("constant polynomial has no monotonicity radius")
    lead = coeffs[0]
    # a_i is the coefficient of x^i
    interior = [i * abs(coeffs[m - i]) for i in range(1, m)]
    top = max(interior) if interior else 0
    return 1 + Fraction(top, m * abs(lead))


def monotonicity_radius(p1_coeffs: Sequence[int], p2_coeffs: Sequence[int]) -> int:
    """Integer radius outside of which both polynomials are monotone.

    Uses the bound ``1 + max(|a_1|, 2|a_2|, ..., (m-1)|a_{m-1}|) / (m |a_m|)``
    for each polynomial; an empty max is 0.
    """
    r = max(_cauchy_derivative_bound(p1_coeffs), _cauchy_derivative_bound(p2_coeffs))
    return math.ceil(r)


def parse_link(text: str) -> LinkFunction:
    """``T:1:2``, ``H:1:3``, ``PT:1,0,0:1,0``, ``general:1,0,0:1,0,0:minus``."""
    parts = text.strip().split(":")
    kind = _parse_kind(parts[0])
    if kind in (LinkKind.GENERALIZED_TOEPLITZ, LinkKind.GENERALIZED_HANKEL):
        if len(parts) != 3:
            raise ValueError(f"expected KIND:alpha:beta, got {text!r}")
        return LinkFunction(kind, alpha=int(parts[1]), beta=int(parts[2]))
    if len(parts) not in (3, 4):
        raise ValueError(f"expected KIND:p1:p2[:sign], got {text!r}")
    p1 = tuple(int(c) for c in parts[1].split(","))
    p2 = tuple(int(c) for c in parts[2].split(","))
    sign = Sign(parts[3]) if len(parts) == 4 else Sign.MINUS
    return LinkFunction(kind, p1=p1, p2=p2, sign=sign)
