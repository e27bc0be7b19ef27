"""Every bundled fixture carries an ``expected`` block; each one is checked here."""

from fractions import Fraction

import pytest

from multibin.bpp_classic import PackSolution, exact_min_bins, validate
from multibin.bpp_relational import RelationSet, check_constraints, order_within_bins
from multibin.coloring import ColoredGraph, chromatic_coloring, colored_pack, count_proper_colorings, is_proper, quality
from multibin.instance_io import fixture_names, load_fixture
from multibin.mse_core import Ordering, dominates, enumerate_scale
from multibin.pipelines import (form_general_items, group_by_color, mean_completion, order_colors, pareto_layers,
                                sequence_cost, swf_order)


def covers(scale):
    better = {(i, j) for i, a in enumerate(scale) for j, b in enumerate(scale) if dominates(a, b) == Ordering.BETTER}
    return {(i + 1, j + 1) for i, j in better if not any((i, k) in better and (k, j) in better for k in range(len(scale)))}


def check_fig8(f, want):
    scale = enumerate_scale(f.payload.l, f.payload.eta)
    assert [list(e.counts) for e in scale] == want["estimates"]
    assert covers(scale) == {tuple(e) for e in want["hasse_edges"]}
    for i, j in want["incomparable"]:
        assert dominates(scale[i - 1], scale[j - 1]) == Ordering.INCOMPARABLE


def check_fig2(f, want):
    p = f.payload
    assert validate(p.instance, p.solution).ok == want["valid"]
    assert p.solution.num_bins == want["num_bins"]
    assert exact_min_bins(p.instance).num_bins == want["min_bins"]


def check_fig11(f, want):
    inst = f.payload.instance
    _, m = colored_pack(inst.items, inst.capacity)
    assert m["bins_used"] == want["bins_used"] and m["per_color_spans"] == want["per_color_spans"]


def check_fig12(f, want):
    g = f.payload
    assert chromatic_coloring(g)[0] == want["chromatic_number"]
    assert count_proper_colorings(g, 3) == want["colorings_with_3"]


def check_fig13(f, want):
    g = f.payload
    for q in want["quality"]:
        N = quality(g, q["configuration"])
        assert [N.w, list(N.e.counts)] == q["N"]
    total = 1
    for v in g.vertices:
        total *= len(g.candidates[v])
    assert total == want["configurations"]


def check_fig15(f, want):
    g: ColoredGraph = f.payload
    for sol in want["printed_solutions"]:
        col = {int(v): c for v, c in sol.items()}
        assert is_proper(g.induced(col), col) and len(set(col.values())) == want["printed_colors"]


def check_messages(f, want):
    ms = f.payload.items
    s = swf_order(ms)
    assert list(s.order) == want["swf_order"]
    assert mean_completion(s) == Fraction(want["mean_completion"])
    assert [[m.id for m in lay] for lay in pareto_layers(ms)] == want["layers"]


def check_relations(f, want):
    i, r = f.payload.instance, f.payload.relations
    for key, rel in (("conflict_violation", RelationSet(conflicts=r.conflicts)),
                     ("precedence_violation", RelationSet(precedence=r.precedence))):
        bins = tuple(tuple(b) for b in want[key]["bins"])
        used = {x for b in bins for x in b}
        rest = tuple((it.id,) for it in i.items if it.id not in used)
        (v,) = check_constraints(i, rel, PackSolution(bins + rest))
        assert list(v.items) == want[key]["pair"]
    for case in want["ordered"]:
        assert list(order_within_bins(PackSolution((tuple(case["bin"]),)), r).bins[0]) == case["result"]


def check_table13(f, want):
    p = f.payload
    gis = []
    for members in group_by_color(p.items).values():
        gis.extend(form_general_items(members, p.W, len(gis) + 1))
    by = {g.label: g for g in gis}
    assert {g.label: list(g.members) for g in gis} == want["general_items"]
    assert {g.label: g.width for g in gis} == want["general_item_widths"]
    m3 = [by[x] for x in want["machine3_printed_order"]]
    assert order_colors(m3, p.table)[1] == want["machine3_optimal_cost"]
    assert sequence_cost([g.color for g in m3], p.table) == want["machine3_printed_cost"]
    m2 = [by[x].color for x in want["machine2_printed_order"]]
    assert sequence_cost(m2, p.table) == want["machine2_printed_cost"]


CHECKS = {
    "fig2": check_fig2, "fig8": check_fig8, "fig11": check_fig11, "fig12": check_fig12, "fig13": check_fig13,
    "fig15": check_fig15, "messages": check_messages, "relations": check_relations, "table13": check_table13,
}


@pytest.mark.parametrize("name", fixture_names())
def test_fixture_expectations(name):
    f = load_fixture(name)
    assert "expected" in f.extras
    (check,) = [c for prefix, c in CHECKS.items() if name.startswith(prefix + "_")]
    check(f, f.extras["expected"])
