"""Pair-matched words and their Catalan structure.

A word of length ``2k`` is stored as a tuple of small integers in
canonical form (letters numbered in order of first appearance), so
``abab`` is ``(0, 1, 0, 1)``. Positions are 1-based when talking about
vertices: vertex ``t`` closes the edge ``(pi(t-1), pi(t))`` that carries
letter ``w[t]``.
"""
from __future__ import annotations

import math
import string
from dataclasses import dataclass
from functools import cached_property

__all__ = [
    "PairWord",
    "enumerate_pair_words",
    "is_catalan",
    "catalan_number",
    "canonicalize",
    "rotation_classes",
    "dihedral_classes",
    "MAX_K",
]

MAX_K = 6


def canonicalize(letters) -> tuple[int, ...]:
    relabel: dict = {}
    out = []
    for x in letters:
        if x not in relabel:
            relabel[x] = len(relabel)
        out.append(relabel[x])
    return tuple(out)


@dataclass(frozen=True, order=True)
class PairWord:
    letters: tuple[int, ...]

    def __post_init__(self):
        letters = self.letters
        if isinstance(letters, str):
            letters = tuple(letters)
        letters = canonicalize(letters)
        object.__setattr__(self, "letters", letters)
        if not letters or len(letters) % 2:
            raise ValueError("pair-matched words have positive even length")
        counts = [0] * (max(letters) + 1)
        for x in letters:
            counts[x] += 1
        if any(c != 2 for c in counts):
            raise ValueError(f"word {self} is not pair-matched")

    @classmethod
    def parse(cls, text: str) -> "PairWord":
        return cls(tuple(text.strip()))

    def __str__(self):
        return "".join(string.ascii_lowercase[x] for x in self.letters)

    def __len__(self):
        return len(self.letters)

    @property
    def k(self) -> int:
        return len(self.letters) // 2

    @cached_property
    def generating_vertices(self) -> frozenset[int]:
        seen = set()
        out = {0}
        for t, x in enumerate(self.letters, start=1):
            if x not in seen:
                seen.add(x)
                out.add(t)
        return frozenset(out)

    @cached_property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        """``(first, second)`` 1-based positions for each letter, in letter order."""
        first: dict[int, int] = {}
        out = [None] * self.k
        for t, x in enumerate(self.letters, start=1):
            if x in first:
                out[x] = (first[x], t)
            else:
                first[x] = t
        return tuple(out)

    def rotate(self, r: int) -> "PairWord":
        r %= len(self.letters)
        return PairWord(self.letters[r:] + self.letters[:r])

    def reverse(self) -> "PairWord":
        return PairWord(self.letters[::-1])

    def rotations(self) -> set["PairWord"]:
        return {self.rotate(r) for r in range(len(self.letters))}


def enumerate_pair_words(k: int) -> list[PairWord]:
    """All ``(2k-1)!!`` canonical pair-matched words of length ``2k``."""
    if not 1 <= k <= MAX_K:
        raise ValueError(f"k must be in 1..{MAX_K}, got {k}")
    words: list[PairWord] = []
    slots = [-1] * (2 * k)

    def fill(letter: int):
        try:
            first = slots.index(-1)
        except ValueError:
            words.append(PairWord(tuple(slots)))
            return
        slots[first] = letter
        for second in range(first + 1, 2 * k):
            if slots[second] == -1:
                slots[second] = letter
                fill(letter + 1)
                slots[second] = -1
        slots[first] = -1

    fill(0)
    return words


def is_catalan(word) -> bool:
    """Delete cyclically adjacent double letters until nothing is left."""
    w = list(word.letters if isinstance(word, PairWord) else PairWord(tuple(word)).letters)
    while w:
        m = len(w)
        for t in range(m):
            if w[t] == w[(t + 1) % m]:
                if t + 1 < m:
                    del w[t : t + 2]
                else:
                    del w[t]
                    del w[0]
                break
        else:
            return False
    return True


def catalan_number(two_k: int) -> int:
    """``C_{2k} = binom(2k, k) / (k + 1)``, indexed by the even length."""
    if two_k < 0 or two_k % 2:
        raise ValueError(f"Catalan numbers here are indexed by even lengths, got {two_k}")
    k = two_k // 2
    return math.comb(2 * k, k) // (k + 1)


def _class_representative(word: PairWord, reflect: bool) -> PairWord:
    images = set(word.rotations())
    if reflect:
        images |= word.reverse().rotations()
    return min(images)


def rotation_classes(k: int) -> dict[PairWord, list[PairWord]]:
    """Words of length ``2k`` grouped by rotation, keyed by the smallest member."""
    out: dict[PairWord, list[PairWord]] = {}
    for w in enumerate_pair_words(k):
        out.setdefault(_class_representative(w, False), []).append(w)
    return out


def dihedral_classes(k: int) -> dict[PairWord, list[PairWord]]:
    """Words grouped by rotation and reversal.

    Circuit counts are constant on these classes for any symmetric link:
    rotating a circuit or walking it backwards is a bijection.
    """
    out: dict[PairWord, list[PairWord]] = {}
    for w in enumerate_pair_words(k):
        out.setdefault(_class_representative(w, True), []).append(w)
    return out
