from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multibin import oracles
from multibin.bpp_classic import (ORDERS, POLICIES, Item, PackInstance, PackSolution, exact_min_bins, fit_pack,
                                  lower_bound, validate)
from multibin.errors import SizeLimitError, StructuralError

F = Fraction


def inst(*weights, capacity=1, **kw):
    return PackInstance.from_weights([F(str(w)) for w in weights], capacity, **kw)


def contents(instance, sol):
    return [[instance.item(i).weight for i in b] for b in sol.bins]


weights = st.lists(st.integers(1, 20).map(lambda k: F(k, 20)), min_size=1, max_size=10)


def test_items_need_positive_weight_and_must_fit():
    with pytest.raises(ValueError):
        Item(1, 0)
    with pytest.raises(ValueError):
        inst(0.5, 1.5)
    assert Item(1, 0.1).weight == F(1, 10)


def test_validate_examples():
    assert validate(inst(0.5, 0.5), PackSolution(((1, 2),))).ok
    rep = validate(inst(0.6, 0.6), PackSolution(((1, 2),)))
    (v,) = rep.violations
    assert (v.kind, v.bin, v.amount) == ("capacity", 1, F(1, 5))


def test_validate_three_bins_listed_weights_overflow():
    # the listed weights sum to 3.1, so no 3-bin packing of them exists
    i = inst(0.5, 0.55, 0.75, 0.6, 0.45, 0.25)
    rep = validate(i, PackSolution(((1, 2), (3, 5), (4, 6))))
    assert [(v.bin, v.amount) for v in rep.violations] == [(1, F(1, 20)), (2, F(1, 5))]
    assert lower_bound(i) == 4


def test_validate_partition_and_bin_count():
    i = inst(0.2, 0.3, 0.4, max_bins=1)
    rep = validate(i, PackSolution(((1,), (1, 2))))
    kinds = sorted(v.kind for v in rep.violations)
    assert kinds == ["bin_count", "partition", "partition"]
    with pytest.raises(StructuralError):
        validate(i, PackSolution(((9,),)))
    assert validate(i, PackSolution(((1, 2),), (3,)), require_complete=False).ok
    assert not validate(i, PackSolution(((1, 2),), (3,))).ok


def test_fit_pack_examples():
    i = inst(0.5, 0.5, 0.5, 0.5)
    assert fit_pack(i, "FirstFit", "AsGiven").bins == ((1, 2), (3, 4))
    i = inst(0.6, 0.5, 0.4, 0.3, 0.2)
    assert contents(i, fit_pack(i, "FirstFit", "Decreasing")) == [[F("0.6"), F("0.4")], [F("0.5"), F("0.3"), F("0.2")]]
    assert contents(i, fit_pack(i, "NextFit", "AsGiven")) == [[F("0.6")], [F("0.5"), F("0.4")], [F("0.3"), F("0.2")]]


def test_best_and_worst_fit_choices():
    i = inst(0.5, 0.7, 0.2)
    assert fit_pack(i, "BestFit", "AsGiven").bins == ((1,), (2, 3))
    assert fit_pack(i, "WorstFit", "AsGiven").bins == ((1, 3), (2,))
    # equal residuals go to the lowest bin
    i = inst(0.6, 0.6, 0.3)
    assert fit_pack(i, "BestFit", "AsGiven").bins == ((1, 3), (2,))
    assert fit_pack(i, "WorstFit", "AsGiven").bins == ((1, 3), (2,))


def test_unknown_policy():
    with pytest.raises(ValueError):
        fit_pack(inst(0.1), "AnyFit")


def test_lower_bound_examples():
    assert lower_bound(inst(0.5, 0.5)) == 1
    assert lower_bound(inst(0.6, 0.6)) == 2
    assert lower_bound(PackInstance.from_weights([10, 9, 6, 5, 7], 20)) == 2


def test_exact_examples():
    assert exact_min_bins(inst(0.5, 0.5, 0.5, 0.5)).num_bins == 2
    assert exact_min_bins(inst(0.4, 0.4, 0.4)).num_bins == 2
    assert exact_min_bins(PackInstance((), 1)).num_bins == 0


def test_exact_size_limit(monkeypatch):
    big = inst(*([0.1] * 21))
    with pytest.raises(SizeLimitError):
        exact_min_bins(big)
    monkeypatch.setenv("MULTIBIN_EXACT_LIMIT", "25")
    assert exact_min_bins(big).num_bins == 3


@settings(max_examples=80, deadline=None)
@given(weights)
def test_heuristics_valid_and_bounded(ws):
    i = PackInstance.from_weights(ws, 1)
    best = exact_min_bins(i)
    assert validate(i, best).ok
    assert best.num_bins == oracles.brute_min_bins(ws, 1)
    for pol in POLICIES:
        for order in ORDERS:
            sol = fit_pack(i, pol, order)
            assert validate(i, sol).ok
            assert lower_bound(i) <= best.num_bins <= sol.num_bins
            assert fit_pack(i, pol, order) == sol


def test_exact_matches_partition_oracle_on_fifty_seeds():
    import random

    for seed in range(50):
        rng = random.Random(seed)
        ws = [F(rng.randint(1, 20), 20) for _ in range(rng.randint(1, 10))]
        assert exact_min_bins(PackInstance.from_weights(ws, 1)).num_bins == oracles.brute_min_bins(ws, 1), seed
