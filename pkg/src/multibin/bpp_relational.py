"""Relations between items and bins, constraint checking, conflicts, inverse packing."""

from __future__ import annotations

import graphlib
import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from . import kernels
from .bpp_classic import (
    PackInstance, PackSolution, Violation, as_fraction, decreasing_order, exact_min_bins, int_arrays,
    scale_to_int,
)
from .errors import PrecedenceCycleError, StructuralError, check_limit

EXACT_INVERSE_LIMIT = 16


def _pair(a, b) -> frozenset:
    return frozenset((a, b))


def _cycle_check(edges, what: str) -> None:
    ts = graphlib.TopologicalSorter()
    for a, b in edges:
        ts.add(b, a)
    try:
        ts.prepare()
    except graphlib.CycleError as exc:
        raise PrecedenceCycleError(f"{what} contains a cycle: {exc.args[1]}") from None


@dataclass(frozen=True)
class RelationSet:
    """Binary relations over items and bins.

    ``correspondence`` maps (item, bin number) to a grade, 0 forbids the pair.
    ``compatibility`` maps item pairs to grades; grade 0 forbids sharing a bin,
    positive grades are advisory.  ``neighborhood`` holds a directed relation
    kept for reporting only.
    """

    correspondence: Mapping[tuple, int] | None = None
    conflicts: frozenset = frozenset()
    compatibility: Mapping[frozenset, int] = field(default_factory=dict)
    precedence: tuple = ()
    item_dominance: tuple = ()
    bin_importance: tuple = ()
    neighborhood: tuple = ()

    def __post_init__(self):
        conf = set()
        for p in self.conflicts:
            p = tuple(p)
            if len(p) != 2 or p[0] == p[1]:
                raise ValueError(f"conflict {p!r} must join two distinct items")
            conf.add(_pair(*p))
        object.__setattr__(self, "conflicts", frozenset(conf))
        comp = {}
        for k, g in dict(self.compatibility).items():
            k = frozenset(k)
            comp[k] = min(g, comp.get(k, g))
        object.__setattr__(self, "compatibility", comp)
        for name in ("precedence", "item_dominance", "bin_importance", "neighborhood"):
            object.__setattr__(self, name, tuple(tuple(e) for e in getattr(self, name)))
        _cycle_check(self.precedence, "precedence")
        _cycle_check(self.item_dominance, "item dominance")
        _cycle_check(self.bin_importance, "bin importance")

    @classmethod
    def from_matrix(cls, ids, matrix, role: str, **kw) -> "RelationSet":
        """Conflicts or compatibility from a square table (diagonal ignored).

        A conflict exists when either orientation is non-zero.  For
        compatibility the lower grade of the two orientations is kept.
        """
        ids = list(ids)
        cells = [(a, b, g) for a, row in zip(ids, matrix) for b, g in zip(ids, row) if a != b and g is not None]
        if role == "conflicts":
            return cls(conflicts=frozenset(_pair(a, b) for a, b, g in cells if g), **kw)
        if role == "compatibility":
            grades: dict = {}
            for a, b, g in cells:
                key = _pair(a, b)
                grades[key] = min(g, grades.get(key, g))
            return cls(compatibility=grades, **kw)
        raise ValueError(f"unknown role {role!r}")

    def item_ids(self) -> set:
        out = set()
        if self.correspondence:
            out |= {i for i, _ in self.correspondence}
        for p in self.conflicts:
            out |= set(p)
        for p in self.compatibility:
            out |= set(p)
        for e in self.precedence + self.item_dominance + self.neighborhood:
            out |= set(e)
        return out

    def bin_ids(self) -> set:
        out = {b for _, b in (self.correspondence or {})}
        for e in self.bin_importance:
            out |= set(e)
        return out

    def precedence_closure(self) -> set:
        """All (before, after) pairs implied by the precedence edges."""
        succ: dict = {}
        for a, b in self.precedence:
            succ.setdefault(a, set()).add(b)
        closure = set()
        for start in succ:
            stack = list(succ[start])
            seen = set()
            while stack:
                v = stack.pop()
                if v in seen:
                    continue
                seen.add(v)
                closure.add((start, v))
                stack.extend(succ.get(v, ()))
        return closure


@dataclass(frozen=True)
class ConflictGraph:
    items: tuple
    edges: frozenset

    @classmethod
    def build(cls, instance: PackInstance, edges: Iterable = (), augment: bool = True) -> "ConflictGraph":
        """Conflict graph over the instance, plus every pair too heavy to share a bin."""
        ids = tuple(it.id for it in instance.items)
        known = set(ids)
        es = set()
        for a, b in edges:
            if a not in known or b not in known:
                raise StructuralError(f"conflict ({a!r}, {b!r}) names an unknown item")
            if a != b:
                es.add(_pair(a, b))
        if augment:
            its = instance.items
            for x in range(len(its)):
                for y in range(x + 1, len(its)):
                    if its[x].weight + its[y].weight > instance.capacity:
                        es.add(_pair(its[x].id, its[y].id))
        return cls(ids, frozenset(es))

    def adjacent(self, a, b) -> bool:
        return _pair(a, b) in self.edges

    def greedy_clique(self) -> list:
        """A clique grown greedily from high-degree vertices; its size bounds the bin count."""
        deg = {v: 0 for v in self.items}
        for e in self.edges:
            for v in e:
                deg[v] += 1
        clique: list = []
        for v in sorted(self.items, key=lambda v: -deg[v]):
            if all(self.adjacent(v, u) for u in clique):
                clique.append(v)
        return clique


def check_constraints(instance: PackInstance, relations: RelationSet, solution: PackSolution) -> list[Violation]:
    """Every breach of correspondence, precedence, conflict, compatibility and dominance."""
    known = {it.id for it in instance.items}
    for i in relations.item_ids() | set(solution.assigned()) | set(solution.unassigned):
        if i not in known:
            raise StructuralError(f"unknown item id {i!r}")
    out: list[Violation] = []
    where = {}
    for k, b in enumerate(solution.bins, start=1):
        for pos, i in enumerate(b):
            where[i] = (k, pos)
    if relations.correspondence is not None:
        for (i, b), g in sorted(relations.correspondence.items(), key=lambda kv: (str(kv[0][0]), str(kv[0][1]))):
            if g == 0 and i in where and where[i][0] == b:
                out.append(Violation("correspondence", f"item {i!r} placed in forbidden bin {b}", b, items=(i,)))
    closure = relations.precedence_closure()
    for a, c in sorted(closure, key=lambda p: (str(p[0]), str(p[1]))):
        if a in where and c in where and where[a][0] == where[c][0] and where[a][1] > where[c][1]:
            out.append(Violation("precedence", f"item {a!r} must precede item {c!r}", where[a][0], items=(a, c)))
    for k, b in enumerate(solution.bins, start=1):
        for x in range(len(b)):
            for y in range(x + 1, len(b)):
                p = _pair(b[x], b[y])
                if p in relations.conflicts:
                    out.append(Violation("conflict", f"conflicting items {b[x]!r}, {b[y]!r} share bin {k}", k, items=(b[x], b[y])))
                if relations.compatibility.get(p) == 0:
                    out.append(Violation("compatibility", f"incompatible items {b[x]!r}, {b[y]!r} share bin {k}", k, items=(b[x], b[y])))
    for hi, lo in relations.item_dominance:
        if hi not in where and lo in where:
            out.append(Violation("dominance", f"item {hi!r} left out while dominated item {lo!r} is packed", items=(hi, lo)))
    return out


def order_within_bins(solution: PackSolution, relations: RelationSet | Iterable = ()) -> PackSolution:
    """Reorder every bin so that required predecessors come first.

    Among items whose predecessors are all placed, the one that came first in
    the bin goes next, so unrelated items keep their relative order.
    """
    if not isinstance(relations, RelationSet):
        relations = RelationSet(precedence=tuple(relations))
    closure = relations.precedence_closure()
    bins = []
    for b in solution.bins:
        pos = {i: k for k, i in enumerate(b)}
        indeg = {i: 0 for i in b}
        succ: dict = {i: [] for i in b}
        for a, c in closure:
            if a in pos and c in pos:
                succ[a].append(c)
                indeg[c] += 1
        ready = [pos[i] for i in b if indeg[i] == 0]
        heapq.heapify(ready)
        ordered = []
        while ready:
            i = b[heapq.heappop(ready)]
            ordered.append(i)
            for c in succ[i]:
                indeg[c] -= 1
                if indeg[c] == 0:
                    heapq.heappush(ready, pos[c])
        bins.append(tuple(ordered))
    return PackSolution(tuple(bins), solution.unassigned)


def _conflict_pairs(instance: PackInstance, conflicts) -> set:
    if conflicts is None:
        return set()
    if isinstance(conflicts, ConflictGraph):
        return {tuple(e) for e in conflicts.edges}
    if isinstance(conflicts, RelationSet):
        pairs = {tuple(e) for e in conflicts.conflicts}
        pairs |= {tuple(p) for p, g in conflicts.compatibility.items() if g == 0}
        return pairs
    return {tuple(e) for e in conflicts}


def conflict_pack(instance: PackInstance, conflicts=None, mode: str = "exact") -> PackSolution:
    """Fewest bins such that no conflicting pair shares a bin.

    ``mode="greedy"`` is first fit decreasing that skips bins holding a
    conflicting item.
    """
    graph = conflicts if isinstance(conflicts, ConflictGraph) else ConflictGraph.build(
        instance, _conflict_pairs(instance, conflicts))
    if mode == "exact":
        return exact_min_bins(instance, conflicts=[tuple(e) for e in graph.edges], _what="conflict_pack")
    if mode != "greedy":
        raise ValueError(f"unknown mode {mode!r}")
    bins: list[list] = []
    loads: list[Fraction] = []
    for it in decreasing_order(instance.items):
        for k, b in enumerate(bins):
            if loads[k] + it.weight <= instance.capacity and not any(graph.adjacent(it.id, j) for j in b):
                b.append(it.id)
                loads[k] += it.weight
                break
        else:
            bins.append([it.id])
            loads.append(it.weight)
    for b in bins:
        b.sort(key=instance.position)
    return PackSolution(tuple(tuple(b) for b in bins))


def inverse_pack(instance: PackInstance, profits: Mapping | None = None, k: int | None = None,
                 conflicts=None, mode: str = "exact") -> PackSolution:
    """Pack a subset into ``k`` bins maximizing total profit; the rest waits.

    Profits default to the items' ``profit`` field, then to 1 (maximum
    cardinality).  ``mode="greedy"`` fills bins first fit in order of
    decreasing profit density.
    """
    k = k if k is not None else instance.max_bins
    if not k or k < 1:
        raise ValueError("inverse packing needs a positive bin count")
    prof = []
    for it in instance.items:
        p = profits.get(it.id) if profits is not None else it.profit
        p = as_fraction(1 if p is None else p)
        if p < 0:
            raise ValueError(f"item {it.id!r}: profit must be non-negative")
        prof.append(p)
    pairs = _conflict_pairs(instance, conflicts)
    ids = [it.id for it in instance.items]
    if mode == "greedy":
        order = sorted(range(len(ids)), key=lambda x: (-prof[x] / instance.items[x].weight, x))
        bins: list[list] = [[] for _ in range(k)]
        loads = [Fraction(0)] * k
        left = []
        for x in order:
            it = instance.items[x]
            for b in range(k):
                if loads[b] + it.weight <= instance.capacity and not any(
                        (it.id, j) in pairs or (j, it.id) in pairs for j in bins[b]):
                    bins[b].append(it.id)
                    loads[b] += it.weight
                    break
            else:
                left.append(it.id)
        for b in bins:
            b.sort(key=instance.position)
        left.sort(key=instance.position)
        return PackSolution(tuple(tuple(b) for b in bins), tuple(left))
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")
    check_limit("inverse_pack", instance.n, EXACT_INVERSE_LIMIT)
    w, caps, native = int_arrays([it.weight for it in instance.items], *([instance.capacity] * k))
    pint, _ = scale_to_int(prof)
    p = np.array(pint, dtype=np.int64 if native and sum(pint) < 2**62 else object)
    if p.dtype == object:
        w, caps, native = w.astype(object), caps.astype(object), False
    n = len(ids)
    conf = np.zeros((n, n), dtype=np.uint8)
    where = {i: x for x, i in enumerate(ids)}
    for a, b in pairs:
        conf[where[a], where[b]] = conf[where[b], where[a]] = 1
    kernel = kernels.max_profit_assign if native else kernels.max_profit_assign.py_func
    _, assign = kernel(w, p, caps, conf, bool(pairs), True)
    bins = [[] for _ in range(k)]
    left = []
    for x, b in enumerate(assign):
        (bins[int(b)] if b >= 0 else left).append(ids[x])
    return PackSolution(tuple(tuple(b) for b in bins), tuple(left))
