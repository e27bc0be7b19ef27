from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multibin import oracles
from multibin.errors import DimensionMismatch
from multibin.mse_core import (MsEstimate, Ordering, Proximity, canonical_key, compare, dominates,
                               enumerate_scale, generalized_median, integrate, multiset_coefficient,
                               proximity, set_median, total_distance)

E = MsEstimate.of


def estimates(l=3, eta=3):
    return st.sampled_from(oracles.scale_members(l, eta))


def test_multiset_coefficient_values():
    assert multiset_coefficient(1, 5) == 1
    assert multiset_coefficient(3, 3) == 10
    assert multiset_coefficient(5, 1) == 5


def test_multiset_coefficient_matches_enumeration():
    for l in range(1, 5):
        for eta in range(1, 5):
            assert multiset_coefficient(l, eta) == len(oracles.all_multisets(l, eta))


def test_multiset_coefficient_overflow_is_explicit():
    with pytest.raises(OverflowError):
        multiset_coefficient(200, 200)
    with pytest.raises(ValueError):
        multiset_coefficient(0, 3)


def test_scale_three_by_three():
    got = [e.counts for e in enumerate_scale(3, 3)]
    assert got == [(3, 0, 0), (2, 1, 0), (1, 2, 0), (0, 3, 0), (1, 1, 1), (0, 2, 1), (0, 1, 2), (0, 0, 3)]


@pytest.mark.parametrize("l,eta", [(1, 1), (2, 3), (3, 2), (3, 3), (4, 2), (4, 3), (5, 2)])
def test_scale_is_every_interval_multiset(l, eta):
    got = sorted(e.counts for e in enumerate_scale(l, eta))
    want = sorted(c for c in oracles.all_multisets(l, eta) if oracles.is_interval(c))
    assert got == want


@pytest.mark.parametrize("l,eta", [(3, 3), (4, 2), (4, 3)])
def test_canonical_order_extends_dominance(l, eta):
    scale = enumerate_scale(l, eta)
    for i, j in combinations(range(len(scale)), 2):
        assert dominates(scale[j], scale[i]) != Ordering.BETTER


def test_estimate_text_forms():
    e = MsEstimate.parse("3,3:[1,2,0]")
    assert e == E(1, 2, 0) and e.text() == "3,3:[1,2,0]" and str(e) == "(1,2,0)"
    assert MsEstimate.parse("(0,1,2)") == E(0, 1, 2)
    with pytest.raises(DimensionMismatch):
        MsEstimate.parse("3,4:[1,2,0]")
    assert E(2, 0, 1).interval is False and E(0, 2, 1).interval


def test_integrate_and_dimension_checks():
    assert integrate([E(1, 1, 0), E(0, 1, 1)]) == E(1, 2, 1)
    with pytest.raises(DimensionMismatch):
        integrate([E(1, 1), E(1, 1, 0)])
    with pytest.raises(DimensionMismatch):
        proximity(E(2, 0), E(1, 0))


def test_proximity_examples():
    assert proximity(E(3, 0, 0), E(0, 0, 3)) == Proximity(0, 6)
    assert proximity(E(0, 0, 3), E(3, 0, 0)) == Proximity(6, 0)
    assert proximity(E(1, 1, 1), E(1, 1, 1)) == Proximity(0, 0)
    assert abs(proximity(E(0, 3, 0), E(1, 1, 1))) == 2


@pytest.mark.parametrize("l,eta", [(3, 3), (4, 2)])
def test_proximity_equals_bfs_everywhere(l, eta):
    d = oracles.move_distances(l, eta)
    scale = enumerate_scale(l, eta)
    for a in scale:
        for b in scale:
            p = proximity(a, b)
            assert p.magnitude == d[a.counts, b.counts]
            assert (p.delta_minus, p.delta_plus) == oracles.proximity_split(a.counts, b.counts)


@given(estimates(), estimates(), estimates())
def test_proximity_is_a_metric(a, b, c):
    assert abs(proximity(a, b)) == abs(proximity(b, a))
    assert abs(proximity(a, c)) <= abs(proximity(a, b)) + abs(proximity(b, c))
    assert (abs(proximity(a, b)) == 0) == (a == b)
    p, q = proximity(a, b), proximity(b, a)
    assert (p.delta_minus, p.delta_plus) == (q.delta_plus, q.delta_minus)


@given(estimates(4, 3), estimates(4, 3))
def test_dominance_matches_sorted_elements(a, b):
    assert dominates(a, b).value == oracles.sorted_dominance(a, b)
    assert compare(a, b) == dominates(a, b)


@given(estimates(), estimates())
def test_dominance_is_antisymmetric(a, b):
    flip = {Ordering.BETTER: Ordering.WORSE, Ordering.WORSE: Ordering.BETTER}
    o = dominates(a, b)
    assert dominates(b, a) == flip.get(o, o)


def test_compare_across_cardinalities():
    assert compare(E(2, 1, 0), E(1, 1, 0)) == Ordering.BETTER
    assert compare(E(1, 0, 0), E(0, 2, 0)) == Ordering.INCOMPARABLE
    assert canonical_key(E(3, 0, 0)) < canonical_key(E(2, 1, 0))


@settings(max_examples=60)
@given(st.lists(estimates(), min_size=1, max_size=6))
def test_generalized_median_is_optimal(E_):
    m = generalized_median(E_)
    best, total = oracles.median_scan(E_)
    assert total_distance(m, E_) == total
    assert m == best


@given(st.lists(estimates(4, 2), min_size=1, max_size=6))
def test_set_median_is_a_member_and_no_better_than_general(E_):
    s = set_median(E_)
    assert s in E_
    assert min(total_distance(x, E_) for x in E_) == total_distance(s, E_)
    assert total_distance(generalized_median(E_), E_) <= total_distance(s, E_)


def test_median_examples():
    assert generalized_median([E(3, 0, 0), E(0, 0, 3)]) in enumerate_scale(3, 3)
    assert set_median([E(2, 1, 0), E(1, 2, 0), E(0, 3, 0)]) == E(1, 2, 0)
    with pytest.raises(ValueError):
        generalized_median([])
