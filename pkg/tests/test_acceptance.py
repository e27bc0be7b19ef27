"""Acceptance criteria 1-12.

Each test prints one PASS/FAIL line; the terminal summary repeats them all.
"""

import itertools
import random
import time
from fractions import Fraction

import pytest

from multibin import oracles
from multibin.bpp_classic import Item
from multibin.cli import run_command
from multibin.coloring import chromatic_coloring, compat_coloring_pareto, count_proper_colorings, is_proper, partition_coloring, quality
from multibin.instance_io import emit_instance, fixture_names, load_fixture, parse_instance
from multibin.mse_core import Ordering, dominates, enumerate_scale, generalized_median, proximity, total_distance
from multibin.pipelines import (mean_completion, order_colors, pareto_layer_assign, plan_paper, sequence_cost,
                                simulate_periods, swf_order)


@pytest.fixture(autouse=True)
def verdict(request):
    outcome = {"ok": False}
    yield outcome
    name = request.node.name.removeprefix("test_")
    print(f"{'PASS' if outcome['ok'] else 'FAIL'}  {name}")


def done(verdict):
    verdict["ok"] = True


def test_c01a_scale_lists_eight_estimates(verdict):
    got = [e.counts for e in enumerate_scale(3, 3)]
    assert got == [(3, 0, 0), (2, 1, 0), (1, 2, 0), (0, 3, 0), (1, 1, 1), (0, 2, 1), (0, 1, 2), (0, 0, 3)]
    done(verdict)


def test_c01b_excluded_set_matches_reference(verdict):
    kept = {e.counts for e in enumerate_scale(3, 3)}
    excluded = {c for c in oracles.all_multisets(3, 3) if c not in kept}
    assert excluded == {(2, 0, 2), (1, 0, 2)}
    done(verdict)


def test_c02_hasse_relation(verdict):
    want = load_fixture("fig8").extras["expected"]
    scale = enumerate_scale(3, 3)
    reach = {(a, b) for a, b in want["hasse_edges"]}
    for k in range(1, 9):
        reach |= {(a, d) for a, b in reach for c, d in reach if b == c}
    checks = 0
    for i, j in itertools.combinations(range(1, 9), 2):
        exp = Ordering.BETTER if (i, j) in reach else Ordering.WORSE if (j, i) in reach else Ordering.INCOMPARABLE
        assert dominates(scale[i - 1], scale[j - 1]) == exp, (i, j)
        checks += 1
    assert checks == 28
    assert dominates(scale[3], scale[4]) == Ordering.INCOMPARABLE
    done(verdict)


def test_c03_proximity_matches_bfs(verdict):
    for l, eta in ((3, 3), (4, 2)):
        d = oracles.move_distances(l, eta)
        for a in enumerate_scale(l, eta):
            for b in enumerate_scale(l, eta):
                p = proximity(a, b)
                assert p.magnitude == d[a.counts, b.counts]
                assert (p.delta_minus, p.delta_plus) == oracles.proximity_split(a.counts, b.counts)
    done(verdict)


def test_c04_median_optimality(verdict):
    rng = random.Random(0)
    scale = enumerate_scale(3, 3)
    for _ in range(50):
        E = [rng.choice(scale) for _ in range(rng.randint(1, 6))]
        _, best = oracles.median_scan(E)
        assert total_distance(generalized_median(E), E) == best
    done(verdict)


def test_c05_coloring_counts(verdict):
    g = load_fixture("fig12").payload
    assert count_proper_colorings(g, 3) == 6
    assert chromatic_coloring(g)[0] == 3
    done(verdict)


def test_c06_compatibility_front(verdict):
    g = load_fixture("fig13").payload
    assert str(quality(g, {"p": "P2", "q": "Q3", "v": "V3", "w": "W5"})) == "(4;1,3,0)"
    assert str(quality(g, {"p": "P3", "q": "Q5", "v": "V2", "w": "W4"})) == "(2;3,1,0)"
    assert len(list(itertools.product(*(g.candidates[v] for v in g.vertices)))) == 625
    front = compat_coloring_pareto(g)
    assert [(c, (q.w, q.e.counts)) for c, q in front] == oracles.brute_compat_front(g)
    done(verdict)


def test_c07a_reference_partition_colorings_feasible(verdict):
    f = load_fixture("fig15")
    g = f.payload
    for sol in f.extras["expected"]["printed_solutions"]:
        col = {int(v): c for v, c in sol.items()}
        assert sorted(len(set(p) & set(col)) for p in g.parts) == [1] * len(g.parts)
        assert is_proper(g.induced(col), col) and len(set(col.values())) == 2
    done(verdict)


def test_c07b_partition_solver_returns_two_colors(verdict):
    g = load_fixture("fig15").payload
    reps, col, chi = partition_coloring(g)
    assert is_proper(g.induced(reps), col)
    assert chi == 2
    done(verdict)


def test_c08_production_plan(verdict):
    f = load_fixture("table13")
    p, want = f.payload, f.extras["expected"]
    plan = plan_paper(p.items, p.W, p.T, p.M, p.table)
    assert {g.label: list(g.members) for g in plan.general_items} == want["general_items"]
    assert {g.label: g.width for g in plan.general_items} == want["general_item_widths"]
    m3 = [plan.general_item(x) for x in ("VI", "VII", "VIII")]
    _, cost = order_colors(m3, p.table)
    brute = min(sequence_cost([g.color for g in q], p.table) for q in itertools.permutations(m3))
    printed = sequence_cost([g.color for g in m3], p.table)
    assert cost == brute == 2 and printed == 3
    done(verdict)


def test_c09_solver_oracle_equivalence(verdict):
    t0 = time.perf_counter()
    fails = oracles.equivalence_suite(range(50))
    assert {k: v for k, v in fails.items() if v} == {}
    assert len(fails) == 10
    assert time.perf_counter() - t0 < 60
    done(verdict)


def test_c10_heuristic_sanity(verdict):
    fails = oracles.heuristic_suite(range(100))
    assert {k: v for k, v in fails.items() if v} == {}
    done(verdict)


def test_c11_message_scheduling(verdict):
    ms = [Item(i, w) for i, w in ((1, 1), (2, 2), (3, 3))]
    assert mean_completion(swf_order(ms)) == Fraction(10, 3)
    rng = random.Random(1)
    for _ in range(30):
        ms = [Item(i + 1, rng.randint(1, 9), wait_age=rng.randint(0, 5)) for i in range(rng.randint(1, 8))]
        swf = mean_completion(swf_order(ms))
        if len(ms) <= 7:
            assert all(mean_completion(list(q)) >= swf for q in itertools.permutations(ms))
        trace, _ = pareto_layer_assign(ms, 10)
        members = [i for layer in trace for i in layer.members]
        assert sorted(members) == [m.id for m in ms]
        by = {m.id: m for m in ms}
        for layer in trace:
            for a, b in itertools.permutations(layer.members, 2):
                x, y = by[a], by[b]
                assert not (x.weight <= y.weight and x.wait_age >= y.wait_age
                            and (x.weight, x.wait_age) != (y.weight, y.wait_age))
    history = simulate_periods([Item(i, Fraction(3, 5)) for i in range(1, 7)], 1, 5)
    for p, h in enumerate(history, 1):
        assert all(m.wait_age == p for m in h.wait)
    done(verdict)


def test_c11_swf_against_all_orders_at_eight(verdict):
    rng = random.Random(2)
    ms = [Item(i + 1, rng.randint(1, 9)) for i in range(8)]
    swf = mean_completion(swf_order(ms))
    assert min(mean_completion(list(q)) for q in itertools.permutations(ms)) == swf
    done(verdict)


def test_c12_round_trip_and_determinism(verdict, capsys):
    for name in fixture_names():
        f = load_fixture(name)
        assert parse_instance(emit_instance(f)) == f
    import io

    for argv in (["scale", "--l", "3", "--eta", "3"], ["pipeline", "paper", "--fixture", "table13"],
                 ["color", "--fixture", "fig13", "--algo", "compat"], ["oracle", "--seed", "3", "--count", "2"]):
        outs = []
        for _ in range(2):
            buf = io.StringIO()
            assert run_command(argv + ["--format", "machine"], buf, io.StringIO()) == 0
            outs.append(buf.getvalue())
        assert outs[0] == outs[1]
    done(verdict)
