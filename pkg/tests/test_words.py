import math
from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import crossing
from linkmoments.words import (
    PairWord,
    canonicalize,
    catalan_number,
    dihedral_classes,
    enumerate_pair_words,
    is_catalan,
    rotation_classes,
)


def double_factorial(m):
    return math.prod(range(m, 0, -2)) if m > 0 else 1


def test_small_enumerations():
    assert [str(w) for w in enumerate_pair_words(1)] == ["aa"]
    assert sorted(str(w) for w in enumerate_pair_words(2)) == ["aabb", "abab", "abba"]


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_word_count(k):
    words = enumerate_pair_words(k)
    assert len(words) == double_factorial(2 * k - 1)
    assert len(set(words)) == len(words)


def test_k_range():
    with pytest.raises(ValueError):
        enumerate_pair_words(0)
    with pytest.raises(ValueError):
        enumerate_pair_words(7)


def test_rotation_class_sizes_length_six():
    classes = rotation_classes(3)
    sizes = {str(rep): len(m) for rep, m in classes.items()}
    named = {}
    for rep, members in classes.items():
        names = {str(w) for w in members}
        for label in ("aabbcc", "aabccb", "aabcbc", "abacbc", "abcabc"):
            if label in names:
                named[label] = len(members)
    assert named == {"aabbcc": 2, "aabccb": 3, "aabcbc": 6, "abacbc": 3, "abcabc": 1}
    assert sum(sizes.values()) == 15


def test_catalan_examples():
    assert is_catalan(PairWord.parse("aabbcc"))
    assert not is_catalan(PairWord.parse("abcabc"))
    assert not is_catalan(PairWord.parse("abab"))
    assert is_catalan(PairWord.parse("abba"))


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_catalan_matches_chord_oracle(k):
    for w in enumerate_pair_words(k):
        assert is_catalan(w) == (not crossing(w)), str(w)


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 6])
def test_catalan_count(k):
    if k == 6:
        # k=6 has 10395 words; count only the non-crossing ones
        n = sum(not crossing(w) for w in enumerate_pair_words(6))
    else:
        n = sum(is_catalan(w) for w in enumerate_pair_words(k))
    assert n == catalan_number(2 * k)


def test_catalan_numbers():
    assert [catalan_number(2 * k) for k in range(1, 6)] == [1, 2, 5, 14, 42]
    assert catalan_number(0) == 1
    with pytest.raises(ValueError):
        catalan_number(5)


def test_generating_vertices():
    w = PairWord.parse("abcabc")
    assert w.generating_vertices == {0, 1, 2, 3}
    assert PairWord.parse("aabb").generating_vertices == {0, 1, 3}
    assert w.pairs == ((1, 4), (2, 5), (3, 6))


@given(k=st.integers(1, 5), data=st.data())
def test_word_invariants(k, data):
    w = data.draw(st.sampled_from(enumerate_pair_words(k)))
    assert len(w.generating_vertices) == k + 1
    assert Counter(w.letters) == {x: 2 for x in range(k)}
    firsts = [w.letters.index(x) for x in range(k)]
    assert firsts == sorted(firsts)
    r = data.draw(st.integers(0, 2 * k - 1))
    assert is_catalan(w.rotate(r)) == is_catalan(w)
    assert is_catalan(w.reverse()) == is_catalan(w)


def test_parse_and_validation():
    assert PairWord.parse("xyxy") == PairWord.parse("abab")
    assert canonicalize("bbaa") == (0, 0, 1, 1)
    with pytest.raises(ValueError):
        PairWord.parse("aab")
    with pytest.raises(ValueError):
        PairWord.parse("aaab")


def test_dihedral_classes_partition():
    for k in (2, 3, 4):
        classes = dihedral_classes(k)
        members = [w for ms in classes.values() for w in ms]
        assert sorted(members) == sorted(enumerate_pair_words(k))
        for rep, ms in classes.items():
            assert rep == min(ms)
