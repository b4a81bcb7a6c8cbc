import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linkmoments.links import (
    LinkFunction,
    LinkKind,
    Sign,
    Zone,
    delta_L,
    generalized_hankel,
    generalized_toeplitz,
    monotonicity_radius,
    parse_link,
    polynomial_hankel,
    polynomial_toeplitz,
    zone,
)

LINKS = [
    generalized_toeplitz(1, 1),
    generalized_toeplitz(2, 1),
    generalized_toeplitz(1, 3),
    generalized_hankel(1, 1),
    generalized_hankel(2, 5),
    polynomial_toeplitz((1, 0, 0), (1, 0)),
    polynomial_hankel((1, 0, 0), (1, 0)),
    polynomial_toeplitz((1, 0, 0, 0), (2, 0, 1)),
    LinkFunction(LinkKind.GENERAL_BIVARIATE, p1=(1, 0, 0), p2=(1, 0, 0), sign=Sign.MINUS),
]

indices = st.integers(min_value=1, max_value=400)


def test_generalized_toeplitz_values_from_displayed_matrix():
    link = generalized_toeplitz(2, 1)
    assert link.eval(1, 2) == 0
    assert link.eval(5, 1) == -3
    # positions sharing index 0
    assert link(2, 4) == link(4, 2) == 0


def test_polynomial_toeplitz_value():
    assert polynomial_toeplitz((1, 0, 0), (1, 0)).eval(2, 4) == 0


def test_hankel_formula():
    link = generalized_hankel(2, 3)
    assert link(1, 4) == 2 * 1 + 3 * 4
    assert link(4, 1) == 3 * 4 + 2 * 1


@pytest.mark.parametrize("link", LINKS, ids=lambda l: l.label)
@settings(max_examples=200, deadline=None)
@given(i=indices, j=indices)
def test_symmetry(link, i, j):
    assert link.eval(i, j) == link.eval(j, i)


@pytest.mark.parametrize("link", LINKS, ids=lambda l: l.label)
def test_grid_matches_scalar_eval(link):
    g = link.grid(13)
    expected = np.array([[link(i, j) for j in range(1, 14)] for i in range(1, 14)])
    assert np.array_equal(g, expected)
    assert np.array_equal(g, g.T)


@settings(max_examples=100, deadline=None)
@given(i=indices, j=indices)
def test_classical_toeplitz_reduces_to_distance(i, j):
    assert abs(generalized_toeplitz(1, 1).eval(i, j)) == abs(i - j)


def test_zone():
    assert zone(3, 3) is Zone.ZONE1
    assert zone(4, 2) is Zone.ZONE2
    assert zone(1, 5) is Zone.ZONE1
    with pytest.raises(ValueError):
        zone(0, 1)


def test_eval_rejects_nonpositive_indices():
    with pytest.raises(ValueError):
        generalized_toeplitz(1, 2).eval(0, 3)


def test_validation():
    with pytest.raises(ValueError):
        generalized_toeplitz(0, 1)
    with pytest.raises(ValueError):
        polynomial_toeplitz((1, 0), (2, 0))  # equal degrees
    with pytest.raises(ValueError):
        polynomial_hankel((1, 0, 0), (5,))  # constant
    with pytest.raises(ValueError):
        LinkFunction("polynomial_toeplitz", p1=(1.5, 0), p2=(1, 0, 0))


def test_grid_overflow_is_reported():
    link = polynomial_toeplitz((1,) + (0,) * 10, (1, 0))
    assert link(3, 5) == 3**10 - 5
    with pytest.raises(OverflowError):
        link.grid(100)
    # exact evaluation is unaffected
    assert link.eval(10**6, 10**6) == 10**60 - 10**6


def test_delta_classical_toeplitz():
    assert delta_L(generalized_toeplitz(1, 1), 10) == 2


@pytest.mark.parametrize("link", LINKS, ids=lambda l: l.label)
def test_delta_stabilizes(link):
    d64 = delta_L(link, 64)
    assert d64 == delta_L(link, 128)
    assert delta_L(link, 16) <= d64


def brute_delta(link, n):
    best = 0
    for k in range(1, n + 1):
        seen = {}
        for m in range(1, n + 1):
            v = link(k, m)
            seen[v] = seen.get(v, 0) + 1
        best = max(best, max(seen.values()))
    return best


@pytest.mark.parametrize("link", LINKS, ids=lambda l: l.label)
def test_delta_against_scalar_oracle(link):
    assert delta_L(link, 20) == brute_delta(link, 20)


def test_monotonicity_radius_examples():
    assert monotonicity_radius((1, 0, 0), (1, 0)) == 1
    assert monotonicity_radius((1, -10, 0), (1, 0)) == 6
    assert monotonicity_radius((1, 0, 0, 0), (1, 0, 0)) == 1
    with pytest.raises(ValueError):
        monotonicity_radius((3,), (1, 0))


poly = st.lists(st.integers(-20, 20), min_size=2, max_size=5).filter(lambda c: c[0] != 0)


@settings(max_examples=200, deadline=None)
@given(p1=poly, p2=poly)
def test_monotonicity_radius_bounds_derivative_roots(p1, p2):
    r = monotonicity_radius(p1, p2)
    assert r >= 1
    for p in (p1, p2):
        d = np.polyder(np.array(p, dtype=float))
        # integer sign changes of p' on [1, 4R] lie within R
        xs = np.arange(1, 4 * r + 1)
        vals = np.polyval(d, xs)
        for x, a, b in zip(xs[1:], vals[:-1], vals[1:]):
            if a * b < 0:
                assert x - 1 <= r
        if len(d) > 1:
            roots = np.roots(d)
            real = roots[np.abs(roots.imag) < 1e-9].real
            assert np.all(np.abs(real) <= r + 1e-9)


def test_reduced_and_label():
    link = generalized_toeplitz(4, 6)
    assert link.reduced() == generalized_toeplitz(2, 3)
    assert link.label == "T(4,6)"
    assert polynomial_toeplitz((1, 0, 0), (1, 0)).label == "PT[x^2;x]"


@pytest.mark.parametrize("link", LINKS, ids=lambda l: l.label)
def test_dict_roundtrip(link):
    assert LinkFunction.from_dict(link.to_dict()) == link


def test_parse_link():
    assert parse_link("T:1:2") == generalized_toeplitz(1, 2)
    assert parse_link("h:3:1") == generalized_hankel(3, 1)
    assert parse_link("PT:1,0,0:1,0") == polynomial_toeplitz((1, 0, 0), (1, 0))
    with pytest.raises(ValueError):
        parse_link("T:1")
