"""Brute-force reference implementations.

These enumerate everything (set partitions, assignment products, subsets,
colorings, permutations) and share no search code with the solvers.  They
are only meant for small instances.
"""

from __future__ import annotations

import functools
import itertools
import random
from collections import deque
from fractions import Fraction
from typing import Sequence

import numpy as np

from .bpp_classic import Item, PackInstance, exact_min_bins, fit_pack, lower_bound, scale_to_int, validate
from .mse_core import MsEstimate, canonical_key

# ---------------------------------------------------------------- estimates


@functools.lru_cache(maxsize=None)
def all_multisets(l: int, eta: int) -> tuple:
    """Every count vector of size ``eta`` over ``l`` levels, interval or not."""
    return tuple(tuple(c) for c in itertools.product(range(eta + 1), repeat=l) if sum(c) == eta)


def is_interval(counts) -> bool:
    occ = [i for i, c in enumerate(counts) if c]
    return occ[-1] - occ[0] + 1 == len(occ)


@functools.lru_cache(maxsize=None)
def move_distances(l: int, eta: int) -> dict:
    """Shortest one-level-move path lengths between all multisets (BFS from each)."""
    nodes = all_multisets(l, eta)
    out = {}
    for src in nodes:
        dist = {src: 0}
        q = deque([src])
        while q:
            u = q.popleft()
            for i in range(l):
                if not u[i]:
                    continue
                for j in (i - 1, i + 1):
                    if 0 <= j < l:
                        v = list(u)
                        v[i] -= 1
                        v[j] += 1
                        v = tuple(v)
                        if v not in dist:
                            dist[v] = dist[u] + 1
                            q.append(v)
        for dst, d in dist.items():
            out[src, dst] = d
    return out


def proximity_split(a, b) -> tuple[int, int]:
    """(improvements, degradations) on a shortest path; fixed by length and level-sum change."""
    l, eta = len(a), sum(a)
    d = move_distances(l, eta)[tuple(a), tuple(b)]
    shift = sum((i + 1) * c for i, c in enumerate(b)) - sum((i + 1) * c for i, c in enumerate(a))
    return (d - shift) // 2, (d + shift) // 2


def scale_members(l: int, eta: int) -> list:
    return sorted((MsEstimate(c) for c in all_multisets(l, eta) if is_interval(c)), key=canonical_key)


def median_scan(members: Sequence[MsEstimate]) -> tuple[MsEstimate, int]:
    l, eta = members[0].l, members[0].eta
    d = move_distances(l, eta)
    best = None
    for c in scale_members(l, eta):
        t = sum(d[c.counts, m.counts] for m in members)
        if best is None or t < best[1]:
            best = (c, t)
    return best


def at_least_as_good(a: Sequence[int], b: Sequence[int]) -> bool:
    """Every prefix of ``a`` holds at least as many elements as that of ``b``."""
    sa = sb = 0
    for x, y in zip(a, b):
        sa += x
        sb += y
        if sa < sb:
            return False
    return True


def sorted_dominance(a: MsEstimate, b: MsEstimate) -> str:
    ea, eb = a.elements(), b.elements()
    if ea == eb:
        return "equal"
    if all(x <= y for x, y in zip(ea, eb)):
        return "better"
    if all(x >= y for x, y in zip(ea, eb)):
        return "worse"
    return "incomparable"


# ---------------------------------------------------------------- packing


@functools.lru_cache(maxsize=None)
def set_partitions(n: int) -> np.ndarray:
    """Restricted growth strings: row r puts item i into block P[r, i]."""
    if n == 0:
        return np.zeros((1, 0), np.int8)
    rows = np.zeros((1, 1), np.int8)
    top = np.zeros(1, np.int8)
    for _ in range(1, n):
        reps = top.astype(np.int64) + 2
        idx = np.repeat(np.arange(rows.shape[0]), reps)
        choice = (np.arange(idx.size) - np.repeat(np.cumsum(reps) - reps, reps)).astype(np.int8)
        rows = np.concatenate([rows[idx], choice[:, None]], axis=1)
        top = np.maximum(top[idx], choice)
    return rows


@functools.lru_cache(maxsize=None)
def assignment_product(n: int, k: int, skip: bool = True) -> np.ndarray:
    """Every map of n items to bins 0..k-1 (and -1 = left out when ``skip``)."""
    opts = list(range(k)) + ([-1] if skip else [])
    if n == 0:
        return np.zeros((1, 0), np.int64)
    grids = np.array(np.meshgrid(*[opts] * n, indexing="ij")).reshape(n, -1).T
    return grids.astype(np.int64)


def _ints(weights, *caps):
    vals, _ = scale_to_int(list(weights) + list(caps))
    return np.array(vals[: len(weights)], np.int64), vals[len(weights):]


def brute_min_bins(weights: Sequence, capacity, conflicts=()) -> int:
    n = len(weights)
    if n == 0:
        return 0
    w, (cap,) = _ints(weights, capacity)
    P = set_partitions(n).astype(np.int64)
    loads = np.zeros(P.shape, np.int64)
    rows = np.arange(P.shape[0])
    for i in range(n):
        loads[rows, P[:, i]] += w[i]
    ok = loads.max(axis=1) <= cap
    for a, b in conflicts:
        ok &= P[:, a] != P[:, b]
    return int(P[ok].max(axis=1).min()) + 1


def feasible_assignments(weights, capacities, conflicts=(), skip=True) -> np.ndarray:
    n, k = len(weights), len(capacities)
    w, caps = _ints(weights, *capacities)
    A = assignment_product(n, k, skip)
    ok = np.ones(A.shape[0], bool)
    for j in range(k):
        ok &= (A == j) @ w <= caps[j]
    for a, b in conflicts:
        ok &= (A[:, a] != A[:, b]) | (A[:, a] < 0)
    return A[ok]


def brute_max_profit(weights, profits, capacities, conflicts=()) -> Fraction:
    A = feasible_assignments(weights, capacities, conflicts)
    p, _ = scale_to_int(list(profits))
    den = scale_to_int(list(profits))[1]
    tot = (A >= 0) @ np.array(p, np.int64)
    return Fraction(int(tot.max()), den)


def feasible_sets(weights, capacities, conflicts=(), groups=None) -> list[tuple]:
    """Distinct packable item subsets (as sorted position tuples)."""
    A = feasible_assignments(weights, capacities, conflicts)
    sets = {tuple(np.flatnonzero(row >= 0)) for row in A}
    if groups is not None:
        need = {}
        for i, g in enumerate(groups):
            need.setdefault(g, []).append(i)
        sets = {s for s in sets if all(sum(1 for i in s if i in m) == 1 for m in need.values())}
    return sorted(sets)


def set_objective(ests, profits, members: tuple, objective: str):
    if objective == "scalar":
        return sum((profits[i] for i in members), Fraction(0))
    if objective == "integrated":
        l = ests[0].l
        return MsEstimate(tuple(sum(ests[i].counts[t] for i in members) for t in range(l)))
    return median_scan([ests[i] for i in members])[0]


def _better_or_equal(a, b, objective) -> bool:
    if objective == "scalar":
        return a >= b
    return at_least_as_good(a.counts, b.counts)


def choose(cands: list, objective: str, first_wins: bool = False):
    """Tie rule: non-dominated, then most members, then canonical estimate, then smallest positions.

    With ``first_wins`` the last tie goes to the earliest candidate instead.
    """
    if not cands:
        return None
    if objective == "scalar":
        top = max(v for _, v in cands)
        pool = [c for c in cands if c[1] == top]
    else:
        pool = [c for c in cands if not any(
            _better_or_equal(o[1], c[1], objective) and o[1] != c[1] for o in cands)]
    size = (lambda m: sum(1 for b in m if b >= 0)) if first_wins else len
    most = max(size(m) for m, _ in pool)
    pool = [c for c in pool if size(c[0]) == most]
    if objective != "scalar":
        first = min((v for _, v in pool), key=canonical_key)
        pool = [c for c in pool if c[1] == first]
    return pool[0] if first_wins else min(pool, key=lambda c: c[0])


def front_points(cands: list, objective: str) -> set:
    pts = {(v.counts if isinstance(v, MsEstimate) else v, len(m)) for m, v in cands}

    def ge(a, b):
        ok = a[0] >= b[0] if objective == "scalar" else at_least_as_good(a[0], b[0])
        return ok and a[1] >= b[1]

    return {p for p in pts if not any(q != p and ge(q, p) for q in pts)}


def brute_gap(items: Sequence[Item], capacities, objective: str, partial: bool):
    """Exhaustive generalized assignment: (value, assignment tuple) by the same tie rule, plus all candidates."""
    levels = next((e.l for it in items for e in (it.position_estimates or {}).values()),
                  next((it.estimate.l for it in items if it.estimate is not None), 1))
    A = feasible_assignments([it.weight for it in items], capacities, skip=partial)
    cands = []
    for row in A:
        vals = []
        ok = True
        for it, b in zip(items, row):
            if b < 0:
                continue
            if objective == "scalar":
                v = it.position_profits.get(int(b) + 1) if it.position_profits is not None else it.profit
            else:
                v = it.position_estimates.get(int(b) + 1) if it.position_estimates is not None else it.estimate
            if v is None:
                ok = False
                break
            vals.append(v)
        if not ok or (objective == "median" and not vals):
            continue
        if objective == "scalar":
            val = sum(vals, Fraction(0))
        elif objective == "integrated":
            val = MsEstimate(tuple(sum(e.counts[t] for e in vals) for t in range(levels)))
        else:
            val = median_scan(vals)[0]
        cands.append((tuple(int(b) for b in row), val))
    return cands


# ---------------------------------------------------------------- coloring


def brute_count_colorings(n: int, edges, k: int) -> int:
    if n == 0:
        return 1
    C = np.array(np.meshgrid(*[range(k)] * n, indexing="ij")).reshape(n, -1).T
    ok = np.ones(C.shape[0], bool)
    for a, b in edges:
        ok &= C[:, a] != C[:, b]
    return int(ok.sum())


def brute_chromatic(n: int, edges) -> int:
    for k in range(1, n + 1):
        if brute_count_colorings(n, edges, k):
            return k
    return 0


def brute_compat_front(graph) -> list[tuple[dict, tuple]]:
    """All configurations whose (w, grade counts) is not dominated, in product order."""
    vs = graph.vertices
    confs = []
    for choice in itertools.product(*[graph.candidates[v] for v in vs]):
        col = {v: c for v, (c, _) in zip(vs, choice)}
        if any(col[a] == col[b] for a, b in (tuple(e) for e in graph.edges)):
            continue
        w = min((graph.compat(col[a], col[b]) for a, b in (tuple(e) for e in graph.edges)), default=graph.best_compat)
        if w < 1:
            continue
        counts = tuple(sum(1 for _, g in choice if g == lv) for lv in range(1, graph.levels + 1))
        confs.append((col, (w, counts)))

    def dom(p, q):
        return p != q and p[0] >= q[0] and sorted_dominance(MsEstimate(p[1]), MsEstimate(q[1])) in ("better", "equal")

    pts = {q for _, q in confs}
    good = {q for q in pts if not any(dom(p, q) for p in pts)}
    return [(c, q) for c, q in confs if q in good]


# ---------------------------------------------------------------- random suite


def _rand_weights(rng: random.Random, n: int, denom: int = 20) -> list[Fraction]:
    return [Fraction(rng.randint(1, denom), denom) for _ in range(n)]


def _rand_estimates(rng: random.Random, n: int, l: int = 3, eta: int = 2) -> list[MsEstimate]:
    scale = scale_members(l, eta)
    return [rng.choice(scale) for _ in range(n)]


def _rand_conflicts(rng: random.Random, n: int, density: float = 0.3) -> list[tuple]:
    return [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < density]


def equivalence_suite(seeds, objectives=("integrated", "median", "scalar")) -> dict[str, list]:
    """Run every exact solver against its oracle; returns name -> list of failing seeds."""
    from . import bpp_relational as rel
    from . import mse_packing as mp

    fails: dict[str, list] = {name: [] for name in (
        "exact_min_bins", "conflict_pack", "inverse_pack", "knapsack_mse", "multiple_choice_mse",
        "multiple_knapsack_mse", "generalized_assignment_mse", "inverse_bpp_mse", "conflict_inverse_mse",
        "pareto_front_biobjective")}

    def items_of(ws, ests, profits, groups=None):
        return [Item(i + 1, w, profit=p, estimate=e, group=None if groups is None else groups[i])
                for i, (w, e, p) in enumerate(zip(ws, ests, profits))]

    def agree(sol, cands, objective):
        best = choose(cands, objective)
        if best is None:
            return sol.objective_value is None
        got = tuple(sorted(int(i) - 1 for i in sol.assignment))
        return got == best[0] and sol.objective_value == best[1]

    for seed in seeds:
        rng = random.Random(seed)
        # classic and relational
        n = rng.randint(1, 10)
        ws = _rand_weights(rng, n)
        inst = PackInstance.from_weights(ws, 1)
        if exact_min_bins(inst).num_bins != brute_min_bins(ws, 1):
            fails["exact_min_bins"].append(seed)
        n = rng.randint(1, 8)
        ws = _rand_weights(rng, n)
        conf = _rand_conflicts(rng, n)
        inst = PackInstance.from_weights(ws, 1)
        sol = rel.conflict_pack(inst, [(a + 1, b + 1) for a, b in conf], "exact")
        r = rel.RelationSet(conflicts=frozenset((a + 1, b + 1) for a, b in conf))
        if (sol.num_bins != brute_min_bins(ws, 1, conf) or not validate(inst, sol).ok
                or rel.check_constraints(inst, r, sol)):
            fails["conflict_pack"].append(seed)
        k = rng.randint(1, 3)
        profits = [Fraction(rng.randint(0, 9)) for _ in range(n)]
        sol = rel.inverse_pack(inst, {i + 1: p for i, p in enumerate(profits)}, k=k)
        got = sum((profits[i - 1] for i in sol.assigned()), Fraction(0))
        if got != brute_max_profit(ws, profits, [1] * k) or len(sol.bins) > k or not validate(inst, sol, False).ok:
            fails["inverse_pack"].append(seed)
        # multiset-estimate models
        objective = objectives[seed % len(objectives)]
        n = rng.randint(1, 10)
        ws = _rand_weights(rng, n)
        ests = _rand_estimates(rng, n)
        profits = [Fraction(rng.randint(0, 9)) for _ in range(n)]
        items = items_of(ws, ests, profits)
        b = Fraction(rng.randint(10, 40), 20)
        cands = [(s, set_objective(ests, profits, s, objective)) for s in feasible_sets(ws, [b])
                 if s or objective != "median"]
        if not agree(mp.knapsack_mse(items, b, objective), cands, objective):
            fails["knapsack_mse"].append(seed)
        front = mp.pareto_front_biobjective("knapsack", items, capacity=b, objective=objective)
        if {s.key() for s in front} != front_points(cands, objective):
            fails["pareto_front_biobjective"].append(seed)
        groups = [rng.randint(1, 3) for _ in range(n)]
        gitems = items_of(ws, ests, profits, groups)
        gcands = [(s, set_objective(ests, profits, s, objective))
                  for s in feasible_sets(ws, [b], groups=groups) if s]
        try:
            ok = agree(mp.multiple_choice_mse(gitems, b, objective), gcands, objective)
        except mp.InfeasibleError:
            ok = not gcands
        if not ok:
            fails["multiple_choice_mse"].append(seed)
        n = rng.randint(1, 8)
        k = rng.randint(1, 3)
        ws = _rand_weights(rng, n)
        ests = _rand_estimates(rng, n)
        profits = [Fraction(rng.randint(0, 9)) for _ in range(n)]
        items = items_of(ws, ests, profits)
        caps = [Fraction(rng.randint(10, 25), 20) for _ in range(k)]

        def model_cands(capacities, conflicts=()):
            return [(s, set_objective(ests, profits, s, objective))
                    for s in feasible_sets(ws, capacities, conflicts) if s or objective != "median"]

        if not agree(mp.multiple_knapsack_mse(items, caps, objective), model_cands(caps), objective):
            fails["multiple_knapsack_mse"].append(seed)
        b = caps[0]
        c_eq = model_cands([b] * k)
        if not agree(mp.inverse_bpp_mse(items, k, b, objective), c_eq, objective):
            fails["inverse_bpp_mse"].append(seed)
        front = mp.pareto_front_biobjective("inverse-bpp", items, capacity=b, k=k, objective=objective)
        if {s.key() for s in front} != front_points(c_eq, objective):
            fails["pareto_front_biobjective"].append(seed)
        conf = _rand_conflicts(rng, n)
        cpairs = [(a + 1, c + 1) for a, c in conf]
        if not agree(mp.conflict_inverse_mse(items, k, b, cpairs, objective), model_cands([b] * k, conf), objective):
            fails["conflict_inverse_mse"].append(seed)
        # generalized assignment with position-dependent values
        n = rng.randint(1, 6)
        k = rng.randint(1, 3)
        scale = scale_members(3, 2)
        gitems = []
        for i in range(n):
            pe = {j: rng.choice(scale) for j in range(1, k + 1) if rng.random() < 0.85}
            pp = {j: Fraction(rng.randint(0, 9)) for j in pe}
            gitems.append(Item(i + 1, Fraction(rng.randint(1, 20), 20), position_estimates=pe, position_profits=pp))
        caps = [Fraction(rng.randint(10, 30), 20) for _ in range(k)]
        partial = rng.random() < 0.5
        cands = brute_gap(gitems, caps, objective, partial)
        try:
            sol = mp.generalized_assignment_mse(gitems, caps, objective,
                                                "allow_partial" if partial else "must_assign_all")
            best = choose(cands, objective, first_wins=True)
            row = tuple(sol.assignment.get(i + 1, 0) - 1 for i in range(n))
            ok = best is not None and row == best[0] and sol.objective_value == best[1]
        except mp.InfeasibleError:
            ok = not cands
        if not ok:
            fails["generalized_assignment_mse"].append(seed)
    return fails


def heuristic_suite(seeds) -> dict[str, list]:
    """Fitting heuristics: valid, above the bound, first fit decreasing within exact + 2."""
    from . import bpp_relational as rel
    from .bpp_classic import ORDERS, POLICIES

    fails: dict[str, list] = {"validate": [], "lower_bound": [], "ffd_gap": [], "conflict_greedy": []}
    for seed in seeds:
        rng = random.Random(10_000 + seed)
        n = rng.randint(1, 12)
        inst = PackInstance.from_weights(_rand_weights(rng, n), 1)
        lb = lower_bound(inst)
        for pol in POLICIES:
            for order in ORDERS:
                sol = fit_pack(inst, pol, order)
                if not validate(inst, sol).ok:
                    fails["validate"].append(seed)
                if sol.num_bins < lb:
                    fails["lower_bound"].append(seed)
        if fit_pack(inst, "FirstFit", "Decreasing").num_bins > exact_min_bins(inst).num_bins + 2:
            fails["ffd_gap"].append(seed)
        conf = [(a + 1, b + 1) for a, b in _rand_conflicts(rng, n)]
        sol = rel.conflict_pack(inst, conf, "greedy")
        r = rel.RelationSet(conflicts=frozenset(conf))
        if not validate(inst, sol).ok or rel.check_constraints(inst, r, sol) or sol.num_bins < lb:
            fails["conflict_greedy"].append(seed)
    return fails
