import itertools

import pytest

from linkmoments.words import PairWord


def brute_force_count(word, link, n):
    """Count circuits by walking every map pi: {0..2k-1} -> {1..n}.

    Independent of the DFS: it checks the full biconditional on all
    letter pairs directly. Only usable for tiny n.
    """
    if not isinstance(word, PairWord):
        word = PairWord.parse(word)
    k2 = len(word)
    letters = word.letters
    total = 0
    for pi in itertools.product(range(1, n + 1), repeat=k2):
        vals = [link(pi[t - 1], pi[t % k2]) for t in range(1, k2 + 1)]
        ok = True
        for s in range(k2):
            for t in range(s + 1, k2):
                if (letters[s] == letters[t]) != (vals[s] == vals[t]):
                    ok = False
                    break
            if not ok:
                break
        total += ok
    return total


def crossing(word) -> bool:
    """Chord test: two letters cross iff their positions interleave."""
    if not isinstance(word, PairWord):
        word = PairWord.parse(word)
    pairs = word.pairs
    for (a, b), (c, d) in itertools.combinations(pairs, 2):
        if a < c < b < d or c < a < d < b:
            return True
    return False


@pytest.fixture
def oracle_count():
    return brute_force_count
