"""Vertex coloring variants and colored bin packing."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Sequence

import numpy as np

from . import kernels
from .bpp_classic import (
    EXACT_BPP_LIMIT, Item, PackInstance, PackSolution, as_fraction, exact_min_bins, fit_pack, lower_bound,
)
from .errors import InfeasibleError, SizeLimitError, check_limit, exact_limit
from .mse_core import MsEstimate, Ordering, dominates
from .mse_packing import maximal_rows

COLORING_LIMIT = 20
CONFIG_CAP = 10**6
BEST_COMPAT = 4


@dataclass(frozen=True)
class ColoredGraph:
    """Undirected graph with optional coloring data.

    ``candidates`` maps a vertex to ``(color, grade)`` pairs, grade 1 best.
    ``compatibility`` maps unordered color pairs to grades, ``best_compat``
    best; pairs missing from the table count as ``best_compat``.
    """

    vertices: tuple
    edges: frozenset = frozenset()
    parts: tuple | None = None
    candidates: Mapping[Any, tuple] | None = None
    compatibility: Mapping[frozenset, int] = field(default_factory=dict)
    color_weights: Mapping[Any, Any] | None = None
    best_compat: int = BEST_COMPAT
    levels: int = 3

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        known = set(self.vertices)
        if len(known) != len(self.vertices):
            raise ValueError("vertex names must be unique")
        es = set()
        for e in self.edges:
            a, b = tuple(e)
            if a not in known or b not in known:
                raise ValueError(f"edge ({a!r}, {b!r}) names an unknown vertex")
            if a == b:
                raise ValueError(f"self-loop at {a!r}")
            es.add(frozenset((a, b)))
        object.__setattr__(self, "edges", frozenset(es))
        if self.parts is not None:
            parts = tuple(tuple(p) for p in self.parts)
            flat = [v for p in parts for v in p]
            if sorted(map(str, flat)) != sorted(map(str, self.vertices)) or len(flat) != len(set(flat)):
                raise ValueError("parts must cover the vertices disjointly")
            if any(not p for p in parts):
                raise ValueError("parts must be non-empty")
            object.__setattr__(self, "parts", parts)
        if self.candidates is not None:
            object.__setattr__(self, "candidates", {v: tuple(tuple(c) for c in cs) for v, cs in self.candidates.items()})
        object.__setattr__(self, "compatibility", {frozenset(k): int(g) for k, g in dict(self.compatibility).items()})

    @classmethod
    def of(cls, vertices, edges, **kw) -> "ColoredGraph":
        return cls(tuple(vertices), frozenset(frozenset(e) for e in edges), **kw)

    def adjacency(self) -> np.ndarray:
        idx = {v: i for i, v in enumerate(self.vertices)}
        adj = np.zeros((len(self.vertices),) * 2, dtype=np.uint8)
        for e in self.edges:
            a, b = (idx[v] for v in e)
            adj[a, b] = adj[b, a] = 1
        return adj

    def induced(self, vertices) -> "ColoredGraph":
        keep = set(vertices)
        return ColoredGraph(tuple(v for v in self.vertices if v in keep),
                            frozenset(e for e in self.edges if e <= keep))

    def compat(self, c1, c2) -> int:
        return self.compatibility.get(frozenset((c1, c2)), self.best_compat)


def is_proper(graph: ColoredGraph, coloring: Mapping) -> bool:
    return all(v in coloring for v in graph.vertices) and all(
        coloring[a] != coloring[b] for a, b in (tuple(e) for e in graph.edges))


def _degree_order(graph: ColoredGraph, adj: np.ndarray) -> np.ndarray:
    deg = adj.sum(axis=1)
    return np.array(sorted(range(len(graph.vertices)), key=lambda i: (-int(deg[i]), i)), dtype=np.int64)


def chromatic_coloring(graph: ColoredGraph, max_colors: int | None = None) -> tuple[int, dict]:
    """Exact chromatic number and a coloring with colors 1..chi."""
    n = len(graph.vertices)
    check_limit("chromatic_coloring", n, COLORING_LIMIT)
    if n == 0:
        return 0, {}
    adj = graph.adjacency()
    order = _degree_order(graph, adj)
    top = n if max_colors is None else min(n, max_colors)
    for k in range(1, top + 1):
        found, colors = kernels.color_backtrack(adj, order, k)
        if found:
            return k, {v: int(c) + 1 for v, c in zip(graph.vertices, colors)}
    raise InfeasibleError(f"graph needs more than {max_colors} colors")


def count_proper_colorings(graph: ColoredGraph, k: int) -> int:
    """Proper colorings drawn from a palette of ``k`` distinguishable colors."""
    check_limit("count_proper_colorings", len(graph.vertices), COLORING_LIMIT)
    adj = graph.adjacency()
    return int(kernels.count_colorings(adj, _degree_order(graph, adj), k))


@dataclass(frozen=True)
class WeightedColoring:
    coloring: dict
    used: tuple
    weight: Any


def min_weight_coloring(graph: ColoredGraph, color_weights: Mapping | None = None):
    """Proper coloring minimizing the total weight of the colors it uses.

    Scalar weights give a single :class:`WeightedColoring`.  Vector weights
    give the list of Pareto-efficient ones (componentwise minimization), one
    per distinct weight vector.
    """
    weights = dict(color_weights if color_weights is not None else graph.color_weights or {})
    if not weights:
        raise ValueError("a palette with weights is required")
    palette = list(weights)
    chi, base = chromatic_coloring(graph)
    if chi > len(palette):
        raise InfeasibleError(f"graph needs {chi} colors, palette has {len(palette)}")
    vector = any(isinstance(w, (tuple, list)) for w in weights.values())

    def relabel(used):
        return {v: used[c - 1] for v, c in base.items()}

    if not vector:
        w = {c: as_fraction(x) for c, x in weights.items()}
        used = tuple(sorted(palette, key=lambda c: (w[c], palette.index(c)))[:chi])
        used = tuple(c for c in palette if c in used)
        return WeightedColoring(relabel(used), used, sum((w[c] for c in used), Fraction(0)))
    vecs = {c: tuple(as_fraction(x) for x in wv) for c, wv in weights.items()}
    subsets = list(itertools.combinations(palette, chi)) if chi else [()]
    totals = [tuple(sum(col) for col in zip(*(vecs[c] for c in s))) if s else () for s in subsets]
    seen: dict = {}
    for sub, t in zip(subsets, totals):
        seen.setdefault(t, sub)
    front = []
    for t, sub in seen.items():
        if not any(o != t and all(x <= y for x, y in zip(o, t)) for o in seen):
            front.append(WeightedColoring(relabel(sub), sub, t))
    return front


@dataclass(frozen=True)
class QualityVector:
    """Minimum compatibility over edges and counts of candidate grades."""

    w: int
    e: MsEstimate

    def compare(self, other: "QualityVector") -> Ordering:
        if self == other:
            return Ordering.EQUAL
        d = dominates(self.e, other.e)
        if self.w >= other.w and d in (Ordering.BETTER, Ordering.EQUAL):
            return Ordering.BETTER
        if self.w <= other.w and d in (Ordering.WORSE, Ordering.EQUAL):
            return Ordering.WORSE
        return Ordering.INCOMPARABLE

    def __str__(self) -> str:
        return f"({self.w};{','.join(map(str, self.e.counts))})"


def quality(graph: ColoredGraph, configuration: Mapping) -> QualityVector:
    grade = {}
    for v in graph.vertices:
        for c, g in graph.candidates[v]:
            if c == configuration[v]:
                grade[v] = g
                break
        else:
            raise ValueError(f"{configuration[v]!r} is not a candidate of {v!r}")
    w = min((graph.compat(configuration[a], configuration[b]) for a, b in (tuple(e) for e in graph.edges)),
            default=graph.best_compat)
    return QualityVector(w, MsEstimate.from_elements(graph.levels, grade.values()))


def compat_coloring_pareto(graph: ColoredGraph, min_compat: int = 1, cap: int = CONFIG_CAP) -> list[tuple[dict, QualityVector]]:
    """Pareto-efficient one-candidate-per-vertex configurations.

    Configurations are enumerated in product order (vertices as listed,
    candidates as listed); adjacent vertices must get different colors and
    the minimum compatibility must reach ``min_compat``.  Every configuration
    with a non-dominated quality vector is returned, in enumeration order.
    """
    if graph.candidates is None:
        raise ValueError("graph has no candidate colors")
    vs = graph.vertices
    cands = [graph.candidates[v] for v in vs]
    total = int(np.prod([len(c) for c in cands])) if cands else 1
    if total > cap:
        raise SizeLimitError("compat_coloring_pareto configurations", total, cap)
    n = len(vs)
    idx = {v: i for i, v in enumerate(vs)}
    grids = np.indices([len(c) for c in cands]).reshape(n, -1).T if n else np.zeros((1, 0), np.int64)
    grades = np.stack([np.array([g for _, g in cands[i]])[grids[:, i]] for i in range(n)], axis=1) if n else grids
    w = np.full(grids.shape[0], graph.best_compat, dtype=np.int64)
    ok = np.ones(grids.shape[0], dtype=bool)
    for e in graph.edges:
        a, b = sorted((idx[v] for v in e))
        table = np.array([[graph.compat(ca, cb) for cb, _ in cands[b]] for ca, _ in cands[a]], dtype=np.int64)
        same = np.array([[ca == cb for cb, _ in cands[b]] for ca, _ in cands[a]])
        w = np.minimum(w, table[grids[:, a], grids[:, b]])
        ok &= ~same[grids[:, a], grids[:, b]]
    ok &= w >= min_compat
    rows = np.flatnonzero(ok)
    counts = np.stack([(grades[rows] == lv).sum(axis=1) for lv in range(1, graph.levels + 1)], axis=1)
    # larger is better on every coordinate: w and the cumulative grade counts
    pts = np.concatenate([w[rows, None], np.cumsum(counts, axis=1)], axis=1)
    uniq, inv = np.unique(pts, axis=0, return_inverse=True)
    keep = maximal_rows(uniq)[inv.reshape(-1)]
    out = []
    for r, c in zip(rows[keep], counts[keep]):
        conf = {v: cands[i][grids[r, i]][0] for i, v in enumerate(vs)}
        out.append((conf, QualityVector(int(w[r]), MsEstimate(tuple(int(x) for x in c)))))
    return out


def partition_coloring(graph: ColoredGraph, cap: int = CONFIG_CAP) -> tuple[tuple, dict, int]:
    """One representative per part so that the induced chromatic number is least.

    Representative choices are scanned in lexicographic order (parts and their
    members as listed) and the first optimal one is returned.
    """
    if graph.parts is None:
        raise ValueError("graph has no parts")
    total = int(np.prod([len(p) for p in graph.parts]))
    if total > cap:
        raise SizeLimitError("partition_coloring choices", total, cap)
    check_limit("partition_coloring", len(graph.parts), COLORING_LIMIT)
    best = None
    for reps in itertools.product(*graph.parts):
        try:
            chi, col = chromatic_coloring(graph.induced(reps), None if best is None else best[2] - 1)
        except InfeasibleError:
            continue
        best = (tuple(reps), col, chi)
        if chi <= 1:
            break
    return best


def colored_pack(items: Sequence[Item], capacity, policy: str = "monochromatic_bins") -> tuple[PackSolution, dict]:
    """Pack every color separately so no bin mixes colors.

    Each color class is solved exactly when small enough, otherwise by first
    fit decreasing.  Metrics: total bins, bins per color, ``alpha`` (bins over
    the continuous bound of all items) and ``beta`` (largest ratio of a
    color's bins to its own bound).
    """
    if policy != "monochromatic_bins":
        raise ValueError(f"unknown policy {policy!r}")
    capacity = as_fraction(capacity)
    groups: dict = {}
    for it in items:
        groups.setdefault(it.color, []).append(it)
    bins: list = []
    spans: dict = {}
    beta = Fraction(0)
    for color, members in groups.items():
        inst = PackInstance(tuple(members), capacity)
        if len(members) <= exact_limit(EXACT_BPP_LIMIT):
            sol = exact_min_bins(inst)
        else:
            sol = fit_pack(inst, "FirstFit", "Decreasing")
        bins.extend(sol.bins)
        spans[color] = sol.num_bins
        beta = max(beta, Fraction(sol.num_bins, lower_bound(inst)))
    solution = PackSolution(tuple(bins))
    lb = lower_bound(PackInstance(tuple(items), capacity)) if items else 0
    metrics = {
        "bins_used": solution.num_bins,
        "per_color_spans": spans,
        "alpha": Fraction(solution.num_bins, lb) if lb else Fraction(0),
        "beta": beta,
    }
    return solution, metrics
