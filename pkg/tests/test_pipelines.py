import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multibin import oracles
from multibin.bpp_classic import Item
from multibin.errors import InfeasibleError
from multibin.instance_io import load_fixture
from multibin.pipelines import (ColorChangeTable, GeneralItem, ProductionItem, form_general_items, group_by_color,
                                mean_completion, order_colors, pack_periods, pareto_layer_assign, pareto_layers,
                                plan_paper, schedule_in_order, select_messages, sequence_cost, simulate_periods,
                                swf_order)

F = Fraction


@pytest.fixture(scope="module")
def table13():
    f = load_fixture("table13")
    return f.payload, f.extras["expected"]


def general_items(p):
    out = []
    for members in group_by_color(p.items).values():
        out.extend(form_general_items(members, p.W, len(out) + 1))
    return out


def msg(i, w, age=0, **kw):
    return Item(i, F(str(w)), wait_age=age, **kw)


def gi(label, duration, color="c"):
    return GeneralItem(label, color, ((label,),), (1,), (duration,))


def test_group_by_color(table13):
    p, _ = table13
    groups = group_by_color(p.items)
    assert len(groups) == 7
    assert [it.id for it in groups["col3"]] == [18, 19, 20, 21, 22]


def test_form_general_items(table13):
    p, want = table13
    groups = group_by_color(p.items)
    (one,) = form_general_items(groups["col1"], p.W)
    assert one.width == 19 and one.members == (1, 2, 3, 4)
    assert [g.members for g in form_general_items(groups["col3"], p.W)] == [(18, 19), (20, 21, 22)]
    gis = general_items(p)
    assert {g.label: list(g.members) for g in gis} == want["general_items"]
    assert {g.label: g.width for g in gis} == want["general_item_widths"]
    with pytest.raises(InfeasibleError):
        form_general_items([ProductionItem(1, 21, 5, "c")], 20)


def test_general_items_fit_the_bar():
    rng = random.Random(4)
    for _ in range(30):
        items = [ProductionItem(i, rng.randint(1, 10), rng.choice([10, 20, 30]), "c") for i in range(rng.randint(1, 9))]
        gis = form_general_items(items, 20)
        assert all(g.width <= 20 for g in gis)
        assert sorted(i for g in gis for i in g.members) == [it.id for it in items]


def test_pack_periods_examples():
    assert set(pack_periods([gi(x, 10) for x in "abc"], 3, 10).values()) == {(1, 1), (2, 1), (3, 1)}
    assert pack_periods([gi("a", 6), gi("b", 6)], 1, 10) == {"a": (1, 1), "b": (1, 2)}
    with pytest.raises(InfeasibleError):
        pack_periods([gi("a", 11)], 1, 10)


def test_order_colors_examples(table13):
    p, want = table13
    one = [gi(x, 1) for x in "abc"]
    table = ColorChangeTable(("c",), ((0,),))
    assert order_colors(one, table) == (one, 0)
    by = {g.label: g for g in general_items(p)}
    m3 = [by[x] for x in want["machine3_printed_order"]]
    order, cost = order_colors(m3, p.table)
    assert cost == want["machine3_optimal_cost"] == 2
    assert [g.label for g in order] == ["VIII", "VI", "VII"]
    assert min(sequence_cost([g.color for g in q], p.table) for q in itertools.permutations(m3)) == 2
    assert sequence_cost([by[x].color for x in want["machine3_printed_order"]], p.table) == 3
    assert sequence_cost([by[x].color for x in want["machine2_printed_order"]], p.table) == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_order_colors_matches_permutations(seed):
    rng = random.Random(seed)
    k = rng.randint(1, 4)
    colors = tuple(f"c{i}" for i in range(k))
    table = ColorChangeTable(colors, [[0 if a == b else rng.randint(0, 5) for b in range(k)] for a in range(k)])
    seq = [gi(str(i), 1, rng.choice(colors)) for i in range(rng.randint(0, 7))]
    start = rng.choice([None, *colors])
    order, cost = order_colors(seq, table, start_color=start)
    assert sorted(g.label for g in order) == sorted(g.label for g in seq)
    assert cost == sequence_cost([g.color for g in order], table, start)
    assert cost == min(sequence_cost([g.color for g in q], table, start) for q in itertools.permutations(seq))


def test_plan_paper(table13):
    p, want = table13
    empty = plan_paper([], p.W, p.T, p.M, p.table)
    assert empty.color_change_cost == 0 and empty.general_items == []
    plan = plan_paper(p.items, p.W, p.T, p.M, p.table)
    assert {g.label: list(g.members) for g in plan.general_items} == want["general_items"]
    for machine, periods in plan.schedules.items():
        for period, labels in periods:
            assert sum(plan.general_item(x).duration for x in labels) <= p.T
    printed = {it.general_item: (it.machine, it.period) for it in p.items}
    labelled = plan_paper(p.items, p.W, p.T, p.M, p.table, placement=printed)
    assert labelled.placement == printed
    assert labelled.unused_area >= 0 and labelled.idle_time >= 0
    with pytest.raises(InfeasibleError):
        plan_paper(p.items, p.W, p.T, p.M, p.table, placement={"I": (1, 1)})


def test_swf_examples():
    ms = [msg(1, 3), msg(2, 1), msg(3, 2)]
    assert swf_order(ms).order == (2, 3, 1)
    assert swf_order([msg(2, 1), msg(1, 1)]).order == (1, 2)
    f = load_fixture("messages")
    ms, want = f.payload.items, f.extras["expected"]
    s = swf_order(ms)
    assert list(s.order) == want["swf_order"]
    assert mean_completion(s) == F(want["mean_completion"]) == F(10, 3)
    assert mean_completion(schedule_in_order(ms[::-1])) == F(14, 3)
    with pytest.raises(ValueError):
        mean_completion([])


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 9), min_size=1, max_size=7))
def test_swf_is_optimal(ws):
    ms = [msg(i + 1, w) for i, w in enumerate(ws)]
    best = min(mean_completion(list(q)) for q in itertools.permutations(ms))
    assert mean_completion(swf_order(ms)) == best


def test_select_messages_examples():
    ms = [msg(1, 1), msg(2, 2)]
    sel = select_messages(ms, 4)
    assert [m.id for m in sel.selected] == [1, 2] and sel.wait == ()
    sel = select_messages([msg(i, 0.6) for i in (1, 2, 3)], 1)
    assert [m.id for m in sel.selected] == [1]
    assert [(m.id, m.wait_age) for m in sel.wait] == [(2, 1), (3, 1)]
    with pytest.raises(ValueError):
        select_messages(ms, 4, "fastest")


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from(["count", "count+age", "importance", "estimate"]))
def test_selection_conserves_messages(seed, objective):
    rng = random.Random(seed)
    scale = oracles.scale_members(3, 2)
    ms = [msg(i + 1, F(rng.randint(1, 10), 10), rng.randint(0, 4), importance=F(rng.randint(0, 5)),
              estimate=rng.choice(scale)) for i in range(rng.randint(1, 8))]
    sel = select_messages(ms, 1, objective)
    assert sum((m.weight for m in sel.selected), F(0)) <= 1
    assert sorted([m.id for m in sel.selected] + [m.id for m in sel.wait]) == [m.id for m in ms]
    age = {m.id: m.wait_age for m in ms}
    assert all(m.wait_age == age[m.id] + 1 for m in sel.wait)
    if objective == "count":
        best = max(len(s) for s in oracles.feasible_sets([m.weight for m in ms], [1]))
        assert len(sel.selected) == best
    if objective == "count+age":
        pts = {(len(s), sum(ms[j].wait_age for j in s)) for s in oracles.feasible_sets([m.weight for m in ms], [1])}
        best = {p for p in pts if not any(q != p and q[0] >= p[0] and q[1] >= p[1] for q in pts)}
        assert {(c, a) for _, c, a in sel.front} == best


def test_pareto_layers():
    (layer,), sel = pareto_layer_assign([msg(1, 1)], 4)
    assert layer.assigned == (1,) and [m.id for m in sel.selected] == [1]
    f = load_fixture("messages")
    ms = f.payload.items
    assert [[m.id for m in lay] for lay in pareto_layers(ms)] == f.extras["expected"]["layers"]
    trace, sel = pareto_layer_assign(ms, f.payload.T)
    assert [t.members for t in trace] == [(1, 2), (3,)]
    assert [m.id for m in sel.selected] == [1, 2] and trace[1].skipped == (3,)
    same = [msg(i, 1, 2) for i in (1, 2, 3)]
    assert len(pareto_layers(same)) == 1


def test_simulate_periods_ages():
    ms = [msg(i, 0.6) for i in range(1, 6)]
    history = simulate_periods(ms, 1, 5)
    assert [[m.id for m in h.selected] for h in history] == [[1], [2], [3], [4], [5]]
    for p, h in enumerate(history):
        assert all(m.wait_age == p + 1 for m in h.wait)
    more = simulate_periods([msg(1, 0.6)], 1, 2, arrivals={2: [msg(9, 0.3)]})
    assert [m.id for m in more[1].selected] == [9]
