from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linkmoments.circuits import limiting_contribution
from linkmoments.links import Zone, generalized_hankel, generalized_toeplitz, polynomial_toeplitz
from linkmoments.words import PairWord, enumerate_pair_words
from linkmoments.zones import (
    CaseKind,
    NonlinearLinkError,
    adjacent_pairs,
    all_zone_cases,
    contribution_volume,
    lattice_density,
    moment_from_volumes,
    zone_case_analysis,
)

Z1, Z2 = Zone.ZONE1, Zone.ZONE2
ABCABC = PairWord.parse("abcabc")
CASE_A = (Z2, Z1, Z2, Z1, Z2, Z1)
CASE_B = (Z1, Z2, Z1, Z2, Z1, Z2)


def test_abab_obstructed():
    c = zone_case_analysis(PairWord.parse("abab"), generalized_toeplitz(1, 2), (Z1, Z2, Z2, Z1))
    assert c.kind is CaseKind.OBSTRUCTED
    # the same zones at alpha = beta lose nothing to the obstruction
    assert c.rank > c.rank_at_equal


def test_aabb_same_zone_pair_loses_degree():
    c = zone_case_analysis(PairWord.parse("aabb"), generalized_toeplitz(1, 2), (Z1, Z1, Z1, Z2))
    assert c.kind is CaseKind.DEGREE_LOSS


def test_abcabc_solution_expressions():
    c = zone_case_analysis(ABCABC, generalized_toeplitz(1, 2), CASE_A)
    assert c.contributing
    assert c.generating == (0, 1, 2, 3)
    assert c.solution[4] == (Fraction(1), Fraction(-1, 2), Fraction(0), Fraction(1, 2))
    assert c.solution[5] == (Fraction(2), Fraction(0), Fraction(-2), Fraction(1))
    assert "pi(0)" in c.expression(4)


@pytest.mark.parametrize("zones", [CASE_A, CASE_B])
def test_abcabc_volume(zones):
    p, se = contribution_volume(zone_case_analysis(ABCABC, generalized_toeplitz(1, 2), zones), 1_000_000, seed=1)
    assert abs(p - 1 / 12) < 3 * se


def test_abcabc_volume_alpha_above_beta():
    p, se = contribution_volume(zone_case_analysis(ABCABC, generalized_toeplitz(3, 1), CASE_A), 1_000_000, seed=2)
    assert abs(p - 1 / 16) < 3 * se


def test_aabb_volumes_sum_to_one():
    cases = [c for c in all_zone_cases(PairWord.parse("aabb"), generalized_toeplitz(1, 2)) if c.contributing]
    assert len(cases) == 4
    vols = [contribution_volume(c, 400_000, seed=i) for i, c in enumerate(cases)]
    total = sum(p for p, _ in vols)
    se = sum(s**2 for _, s in vols) ** 0.5
    assert abs(total - 1) < 3 * se


def test_exactly_two_abcabc_cases_when_weights_differ():
    for link in (generalized_toeplitz(1, 2), generalized_toeplitz(2, 3), generalized_hankel(1, 4)):
        cases = {c.zones for c in all_zone_cases(ABCABC, link) if c.contributing}
        assert cases == {CASE_A, CASE_B}


@pytest.mark.parametrize(
    "link",
    [generalized_toeplitz(1, 2), generalized_toeplitz(3, 1), generalized_hankel(1, 2), generalized_hankel(2, 5)],
    ids=lambda l: l.label,
)
@pytest.mark.parametrize("k", [2, 3])
def test_adjacent_pairs_need_opposite_zones(link, k):
    for w in enumerate_pair_words(k):
        adj = adjacent_pairs(w)
        for c in all_zone_cases(w, link):
            if any(c.zones[f - 1] == c.zones[s - 1] for f, s in adj):
                assert c.kind in (CaseKind.OBSTRUCTED, CaseKind.DEGREE_LOSS), c.describe()


def test_lattice_density():
    c = zone_case_analysis(ABCABC, generalized_toeplitz(1, 2), CASE_A)
    assert lattice_density(c) == Fraction(1, 2)
    c = zone_case_analysis(ABCABC, generalized_toeplitz(2, 3), CASE_A)
    assert lattice_density(c) == Fraction(1, 6)
    aabb = [c for c in all_zone_cases(PairWord.parse("aabb"), generalized_toeplitz(1, 2)) if c.contributing]
    assert all(lattice_density(c) == 1 for c in aabb)


def test_lattice_weighted_volume_matches_counts():
    link = generalized_toeplitz(2, 3)
    weighted = 0.0
    for zones in (CASE_A, CASE_B):
        c = zone_case_analysis(ABCABC, link, zones)
        weighted += float(lattice_density(c)) * contribution_volume(c, 400_000, seed=3)[0]
    ext = limiting_contribution(ABCABC, link)
    assert abs(weighted - ext.value) < 3 * ext.uncertainty + 0.002


def test_moment_from_volumes_continuum_and_lattice():
    v, se = moment_from_volumes(generalized_toeplitz(1, 2), 4, samples=100_000)
    assert abs(v - 2) < 4 * se
    v, se = moment_from_volumes(generalized_hankel(1, 1), 4, samples=100_000)
    assert abs(v - 2) < 4 * se


@settings(max_examples=20, deadline=None)
@given(a=st.integers(1, 6), b=st.integers(1, 6), hankel=st.booleans())
def test_classification_is_scale_invariant(a, b, hankel):
    make = generalized_hankel if hankel else generalized_toeplitz
    w = PairWord.parse("abcabc")
    k1 = [c.kind for c in all_zone_cases(w, make(a, b))]
    k2 = [c.kind for c in all_zone_cases(w, make(2 * a, 2 * b))]
    assert k1 == k2


def test_errors():
    with pytest.raises(NonlinearLinkError):
        zone_case_analysis(PairWord.parse("aabb"), polynomial_toeplitz((1, 0, 0), (1, 0)), (Z1, Z2, Z1, Z2))
    with pytest.raises(ValueError):
        zone_case_analysis(PairWord.parse("aabb"), generalized_toeplitz(1, 2), (Z1, Z2))
    c = zone_case_analysis(PairWord.parse("abab"), generalized_toeplitz(1, 2), (Z1, Z2, Z2, Z1))
    with pytest.raises(ValueError):
        contribution_volume(c)
    with pytest.raises(ValueError):
        lattice_density(c)
