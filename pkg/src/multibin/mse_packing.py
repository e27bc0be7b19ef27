"""Knapsack, assignment and inverse packing models with multiset-estimate objectives.

All solvers here are exhaustive at desk scale.  Set-valued models (knapsack,
multiple knapsack, inverse packing, multiple choice) enumerate packable item
subsets as bit masks; the generalized assignment enumerates item-to-bin
assignments directly because its objective depends on the chosen bin.

Objectives:

* ``integrated``: componentwise sum of member estimates, ordered by
  :func:`mse_core.compare` (so larger packings can win);
* ``median``: generalized median of member estimates, ordered by dominance;
* ``scalar``: sum of profits.

Among non-dominated candidates the winner has the largest cardinality, then
the earliest estimate in canonical order, then the lexicographically smallest
set of item positions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from .bpp_classic import Item, as_fraction, int_arrays, scale_to_int
from .errors import InfeasibleError, SizeLimitError, check_limit
from .mse_core import MsEstimate, canonical_key, distance_table, enumerate_scale

MseItem = Item

OBJECTIVES = ("integrated", "median", "scalar")
KNAPSACK_LIMIT = 20
MULTI_LIMIT = 12
MULTI_BINS_LIMIT = 4
CONFIG_CAP = 10**6


@dataclass(frozen=True)
class MseSolution:
    """``assignment`` maps packed item ids to bin numbers (1 for single-container models)."""

    assignment: Mapping
    objective_value: MsEstimate | Fraction | None
    objective: str
    order: tuple = ()

    @property
    def cardinality(self) -> int:
        return len(self.assignment)

    @property
    def selected(self) -> tuple:
        ids = self.order or tuple(self.assignment)
        return tuple(i for i in ids if i in self.assignment)

    def bins(self, k: int | None = None) -> list[tuple]:
        k = k or max(self.assignment.values(), default=0)
        return [tuple(i for i in self.selected if self.assignment[i] == b) for b in range(1, k + 1)]

    def key(self) -> tuple:
        """Hashable (objective, cardinality) point, used for front comparisons."""
        v = self.objective_value
        return (v.counts if isinstance(v, MsEstimate) else v, self.cardinality)


# ---------------------------------------------------------------- helpers

def _check_objective(objective: str) -> None:
    if objective not in OBJECTIVES:
        raise ValueError(f"unknown objective {objective!r}; expected one of {OBJECTIVES}")


def _estimate_dims(ests: Sequence[MsEstimate | None], ids: Sequence) -> tuple[int, int]:
    missing = [i for i, e in zip(ids, ests) if e is None]
    if missing:
        raise ValueError(f"items without estimates: {missing}")
    dims = {(e.l, e.eta) for e in ests}
    if len(dims) > 1:
        from .errors import DimensionMismatch
        raise DimensionMismatch(f"estimates use different (l, eta): {sorted(dims)}")
    return dims.pop() if dims else (1, 1)


def _profits(items: Sequence[Item]) -> list[Fraction]:
    out = []
    for it in items:
        if it.profit is None:
            raise ValueError(f"item {it.id!r} has no profit")
        out.append(it.profit)
    return out


def _popcount(masks: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros(masks.shape[0], np.int64)
    for j in range(n):
        out += (masks >> j) & 1
    return out


def _reversed_bits(masks: np.ndarray, n: int) -> np.ndarray:
    # for sets of equal size the lexicographically smallest sorted position list
    # is the mask whose bit-reversal is largest
    out = np.zeros(masks.shape[0], np.int64)
    for j in range(n):
        out |= ((masks >> j) & 1) << (n - 1 - j)
    return out


def maximal_rows(U: np.ndarray) -> np.ndarray:
    """Flags rows of a duplicate-free integer matrix not dominated componentwise (larger is better)."""
    u = U.shape[0]
    keep = np.ones(u, dtype=bool)
    if u == 0:
        return keep
    chunk = max(1, 4_000_000 // max(1, u * U.shape[1]))
    for start in range(0, u, chunk):
        R = U[start:start + chunk]
        ge = (U[None, :, :] >= R[:, None, :]).all(axis=2)
        ge[np.arange(R.shape[0]), np.arange(start, start + R.shape[0])] = False
        keep[start:start + R.shape[0]] = ~ge.any(axis=1)
    return keep


@dataclass
class _Scored:
    """Candidates with their objective rows, ready for selection."""

    est: np.ndarray | None     # (m, l) estimate counts, None for scalar
    cum: np.ndarray            # (m, d) vectors compared componentwise, larger better
    card: np.ndarray           # (m,)
    scalar: list | None = None  # exact values for the scalar objective

    def objective_value(self, r: int, objective: str, den: int = 1):
        if objective == "scalar":
            return Fraction(int(self.cum[r, 0]), den)
        return MsEstimate(tuple(int(x) for x in self.est[r]))


def _score_masks(masks: np.ndarray, items: Sequence[Item], objective: str) -> tuple[_Scored, int]:
    n = len(items)
    if objective == "scalar":
        pint, den = scale_to_int(_profits(items))
        P = np.array(pint, dtype=np.int64).reshape(n, 1)
        vals = kernels.subset_counts(masks, P) if n else np.zeros((len(masks), 1), np.int64)
        return _Scored(None, vals, _popcount(masks, n)), den
    ests = [it.estimate for it in items]
    l, eta = _estimate_dims(ests, [it.id for it in items])
    if objective == "integrated":
        C = np.array([e.counts for e in ests], dtype=np.int64).reshape(n, l)
        rows = kernels.subset_counts(masks, C) if n else np.zeros((len(masks), l), np.int64)
    else:
        scale = enumerate_scale(l, eta)
        D = distance_table(scale, ests)
        arg, _ = kernels.subset_medians(masks, D)
        S = np.array([e.counts for e in scale], dtype=np.int64)
        rows = S[arg]
    return _Scored(rows, np.cumsum(rows, axis=1), _popcount(masks, n)), 1


def _select(scored: _Scored, objective: str, tiebreak: np.ndarray) -> int:
    """Index of the chosen candidate; ``tiebreak`` larger wins last."""
    cum, card = scored.cum, scored.card
    if objective == "scalar":
        best = cum[:, 0].max()
        pool = np.flatnonzero(cum[:, 0] == best)
    else:
        uniq, inv = np.unique(cum, axis=0, return_inverse=True)
        inv = inv.reshape(-1)
        pool = np.flatnonzero(maximal_rows(uniq)[inv])
    pool = pool[card[pool] == card[pool].max()]
    if objective != "scalar":
        keys = {}
        for r in pool:
            t = tuple(int(x) for x in scored.est[r])
            if t not in keys:
                keys[t] = canonical_key(MsEstimate(t))
        first = min(keys, key=keys.get)
        pool = pool[(scored.est[pool] == np.array(first)).all(axis=1)]
    return int(pool[np.argmax(tiebreak[pool])])


def _front(scored: _Scored, tiebreak: np.ndarray) -> list[int]:
    """One representative index per non-dominated (objective, cardinality) point."""
    pts = np.concatenate([scored.cum, scored.card[:, None]], axis=1)
    uniq, inv = np.unique(pts, axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    keep = maximal_rows(uniq)
    reps = {}
    for r in np.flatnonzero(keep[inv]):
        g = inv[r]
        if g not in reps or tiebreak[r] > tiebreak[reps[g]]:
            reps[g] = r
    return list(reps.values())


def _sort_front(sols: list[MseSolution]) -> list[MseSolution]:
    def key(s):
        v = s.objective_value
        vk = canonical_key(v) if isinstance(v, MsEstimate) else (-(v or 0),)
        return (-s.cardinality, vk, s.selected)
    return sorted(sols, key=key)


# ---------------------------------------------------------------- set models

@dataclass
class _SetModel:
    items: tuple
    caps: list
    conflicts: set
    identical: bool

    def arrays(self):
        n = len(self.items)
        order = sorted(range(n), key=lambda x: (-self.items[x].weight, x))
        w, caps, native = int_arrays([self.items[x].weight for x in order], *self.caps)
        if not native:
            raise SizeLimitError("weights", 0, 0)
        conf = np.zeros((n, n), dtype=np.uint8)
        pos = {self.items[x].id: r for r, x in enumerate(order)}
        for a, b in self.conflicts:
            if a in pos and b in pos:
                conf[pos[a], pos[b]] = conf[pos[b], pos[a]] = 1
        return order, w, caps, conf

    def packable(self) -> np.ndarray:
        order, w, caps, conf = self.arrays()
        flags_sorted = kernels.packable_masks(w, caps, conf, bool(self.conflicts), self.identical)
        # translate masks over weight-sorted items back to item order
        sorted_masks = np.flatnonzero(flags_sorted).astype(np.int64)
        masks = np.zeros_like(sorted_masks)
        for r, x in enumerate(order):
            masks |= ((sorted_masks >> r) & 1) << x
        return np.sort(masks)

    def assign(self, mask: int) -> dict:
        order, w, caps, conf = self.arrays()
        sel = [r for r, x in enumerate(order) if (mask >> x) & 1]
        sub_conf = conf[np.ix_(sel, sel)] if sel else np.zeros((0, 0), np.uint8)
        ok, a = kernels.assign_fits(w[sel], caps, sub_conf, bool(self.conflicts), self.identical)
        assert ok
        return {self.items[order[r]].id: int(b) + 1 for r, b in zip(sel, a)}


def _set_solution(model: _SetModel, mask: int, scored: _Scored, r: int, objective: str, den: int) -> MseSolution:
    ids = tuple(it.id for it in model.items)
    return MseSolution(model.assign(mask), scored.objective_value(r, objective, den), objective, ids)


def _solve_set(model: _SetModel, objective: str, masks: np.ndarray | None = None, front: bool = False):
    _check_objective(objective)
    n = len(model.items)
    if masks is None:
        masks = model.packable()
    if objective == "median":
        masks = masks[masks != 0]
    if masks.size == 0:
        if front:
            return []
        return MseSolution({}, None, objective, tuple(it.id for it in model.items))
    scored, den = _score_masks(masks, model.items, objective)
    tb = _reversed_bits(masks, n)
    if front:
        return _sort_front([_set_solution(model, int(masks[r]), scored, r, objective, den)
                            for r in _front(scored, tb)])
    r = _select(scored, objective, tb)
    return _set_solution(model, int(masks[r]), scored, r, objective, den)


def _pairs(conflicts) -> set:
    if conflicts is None:
        return set()
    edges = getattr(conflicts, "edges", conflicts)
    return {tuple(e) for e in edges}


def knapsack_mse(items: Sequence[Item], b, objective: str = "integrated") -> MseSolution:
    """Best subset of ``items`` with total weight at most ``b``."""
    check_limit("knapsack_mse", len(items), KNAPSACK_LIMIT)
    return _solve_set(_SetModel(tuple(items), [as_fraction(b)], set(), True), objective)


def _check_multi(what: str, n: int, k: int) -> None:
    check_limit(what, n, MULTI_LIMIT)
    if k > MULTI_BINS_LIMIT:
        raise SizeLimitError(f"{what} bins", k, MULTI_BINS_LIMIT)
    if k < 1:
        raise ValueError("at least one container is required")


def multiple_knapsack_mse(items: Sequence[Item], capacities: Sequence, objective: str = "integrated",
                          conflicts=None) -> MseSolution:
    """Each item into at most one of several knapsacks."""
    caps = [as_fraction(c) for c in capacities]
    _check_multi("multiple_knapsack_mse", len(items), len(caps))
    return _solve_set(_SetModel(tuple(items), caps, _pairs(conflicts), len(set(caps)) == 1), objective)


def inverse_bpp_mse(items: Sequence[Item], k: int, b, objective: str = "integrated") -> MseSolution:
    """``k`` interchangeable bins of capacity ``b``."""
    return multiple_knapsack_mse(items, [b] * k, objective)


def conflict_inverse_mse(items: Sequence[Item], k: int, b, conflicts, objective: str = "integrated") -> MseSolution:
    """Inverse packing where conflicting items may not share a bin."""
    return multiple_knapsack_mse(items, [b] * k, objective, conflicts=conflicts)


def _groups(items: Sequence[Item]) -> dict:
    groups: dict = {}
    for x, it in enumerate(items):
        if it.group is None:
            raise ValueError(f"item {it.id!r} has no group")
        groups.setdefault(it.group, []).append(x)
    return groups


def _choice_masks(items: Sequence[Item], b: Fraction) -> np.ndarray:
    groups = _groups(items)
    total = 1
    for g in groups.values():
        total *= len(g)
    if total > CONFIG_CAP:
        raise SizeLimitError("multiple_choice_mse configurations", total, CONFIG_CAP)
    w, caps, native = int_arrays([it.weight for it in items], b)
    masks = np.zeros(1, np.int64)
    loads = np.zeros(1, np.int64)
    for members in groups.values():
        bits = np.array([1 << x for x in members], np.int64)
        ws = np.array([w[x] for x in members], np.int64)
        masks = (masks[:, None] | bits[None, :]).reshape(-1)
        loads = (loads[:, None] + ws[None, :]).reshape(-1)
        ok = loads <= caps[0]
        masks, loads = masks[ok], loads[ok]
    if masks.size == 0:
        mins = {g: min(items[x].weight for x in m) for g, m in groups.items()}
        alone = [g for g, v in mins.items() if v > b]
        culprits = alone or list(groups)
        raise InfeasibleError(
            f"no choice of one item per group fits capacity {b}; minimal weights sum to {sum(mins.values())}",
            culprits)
    return np.sort(masks)


def multiple_choice_mse(items: Sequence[Item], b, objective: str = "median") -> MseSolution:
    """Exactly one item from every group, total weight at most ``b``."""
    b = as_fraction(b)
    check_limit("multiple_choice_mse", len(items), KNAPSACK_LIMIT)
    masks = _choice_masks(items, b)
    return _solve_set(_SetModel(tuple(items), [b], set(), True), objective, masks)


# ---------------------------------------------------------------- generalized assignment

def _position_value(it: Item, j: int, objective: str):
    if objective == "scalar":
        if it.position_profits is not None:
            return it.position_profits.get(j)
        return it.profit
    if it.position_estimates is not None:
        return it.position_estimates.get(j)
    return it.estimate


def _assignments(items, caps, objective, partial):
    k = len(caps)
    options = []
    for it in items:
        opts = [j for j in range(k) if _position_value(it, j + 1, objective) is not None and it.weight <= caps[j]]
        if partial:
            opts.append(-1)
        if not opts:
            raise InfeasibleError(f"item {it.id!r} has no admissible bin", [it.id])
        options.append(np.array(opts, np.int64))
    total = 1
    for o in options:
        total *= len(o)
    if total > CONFIG_CAP:
        raise SizeLimitError("generalized_assignment_mse configurations", total, CONFIG_CAP)
    w, c, native = int_arrays([it.weight for it in items], *caps)
    A = np.zeros((1, 0), np.int64)
    for i, o in enumerate(options):
        A = np.concatenate([np.repeat(A, len(o), axis=0), np.tile(o, A.shape[0])[:, None]], axis=1)
        loads = np.zeros((A.shape[0], k), np.int64)
        for j in range(k):
            loads[:, j] = (A == j) @ w[: i + 1].astype(np.int64)
        A = A[(loads <= c[None, :]).all(axis=1)]
    return A


def _score_assignments(A, items, k, objective):
    n = len(items)
    rows_idx = np.arange(n)
    card = (A >= 0).sum(axis=1)
    if objective == "scalar":
        vals = [[_position_value(it, j + 1, objective) or 0 for j in range(k)] + [0] for it in items]
        flat, den = scale_to_int([v for row in vals for v in row])
        P = np.array(flat, np.int64).reshape(n, k + 1)
        tot = P[rows_idx[None, :], A].sum(axis=1) if n else np.zeros(len(A), np.int64)
        return _Scored(None, tot[:, None], card), den
    per = [[_position_value(it, j + 1, objective) for j in range(k)] for it in items]
    ests = [e for row in per for e in row if e is not None]
    l, eta = _estimate_dims(ests, [None] * len(ests))
    E = np.zeros((n, k + 1, l), np.int64)
    for i, row in enumerate(per):
        for j, e in enumerate(row):
            if e is not None:
                E[i, j] = e.counts
    if objective == "integrated":
        rows = E[rows_idx[None, :], A].sum(axis=1)
    else:
        scale = enumerate_scale(l, eta)
        S = np.array([e.elements() for e in scale], np.int64)         # (s, eta)
        M = np.zeros((n, k + 1, eta), np.int64)
        for i, row in enumerate(per):
            for j, e in enumerate(row):
                if e is not None:
                    M[i, j] = e.elements()
        # D[i, j, c]: distance from scale entry c to estimate of item i in bin j (0 when skipped)
        D = np.abs(M[:, :, None, :] - S[None, None, :, :]).sum(axis=3)
        D[:, k, :] = 0
        totals = D[rows_idx[None, :], A].sum(axis=1)                  # (N, s)
        rows = np.array([e.counts for e in scale], np.int64)[totals.argmin(axis=1)]
    return _Scored(rows, np.cumsum(rows, axis=1), card), 1


def _gap_setup(items, capacities, objective, relaxation):
    _check_objective(objective)
    if relaxation not in ("must_assign_all", "allow_partial"):
        raise ValueError(f"unknown relaxation {relaxation!r}")
    caps = [as_fraction(c) for c in capacities]
    _check_multi("generalized_assignment_mse", len(items), len(caps))
    partial = relaxation == "allow_partial"
    A = _assignments(items, caps, objective, partial)
    if objective == "median":
        A = A[(A >= 0).any(axis=1)] if len(items) else A[:0]
    if A.shape[0] == 0 and not partial:
        raise InfeasibleError("no assignment places every item within capacity", [it.id for it in items])
    return caps, A


def _gap_solution(items, A, r, scored, objective, den):
    asg = {it.id: int(b) + 1 for it, b in zip(items, A[r]) if b >= 0}
    return MseSolution(asg, scored.objective_value(r, objective, den), objective, tuple(it.id for it in items))


def generalized_assignment_mse(items: Sequence[Item], capacities: Sequence, objective: str = "scalar",
                               relaxation: str = "must_assign_all") -> MseSolution:
    """Assign items to bins where value depends on the (item, bin) pair.

    Per-bin values come from ``position_profits`` / ``position_estimates``
    (bins numbered from 1) and fall back to the item's own profit or estimate
    when those maps are absent.  A bin missing from a present map is not
    admissible for that item.  Ties after the usual rule go to the first
    assignment in lexicographic order (bins ascending, "unassigned" last).
    """
    caps, A = _gap_setup(items, capacities, objective, relaxation)
    if A.shape[0] == 0:
        return MseSolution({}, None, objective, tuple(it.id for it in items))
    scored, den = _score_assignments(A, items, len(caps), objective)
    r = _select(scored, objective, -np.arange(A.shape[0]))
    return _gap_solution(items, A, r, scored, objective, den)


# ---------------------------------------------------------------- fronts

MODEL_KINDS = ("knapsack", "multiple-knapsack", "inverse-bpp", "conflict-inverse", "multiple-choice", "gap")


def pareto_front_biobjective(model_kind: str, items: Sequence[Item], *, capacity=None, capacities=None,
                             k: int | None = None, conflicts=None, objective: str = "integrated",
                             relaxation: str = "allow_partial") -> list[MseSolution]:
    """All solutions non-dominated by (objective, cardinality), one per point.

    A point dominates another when its objective is at least as good, its
    cardinality at least as large, and one of the two strictly better.
    """
    _check_objective(objective)
    if model_kind == "gap":
        caps, A = _gap_setup(items, capacities, objective, relaxation)
        if A.shape[0] == 0:
            return []
        scored, den = _score_assignments(A, items, len(caps), objective)
        reps = _front(scored, -np.arange(A.shape[0]))
        return _sort_front([_gap_solution(items, A, r, scored, objective, den) for r in reps])
    masks = None
    if model_kind == "knapsack":
        check_limit("pareto_front_biobjective", len(items), KNAPSACK_LIMIT)
        model = _SetModel(tuple(items), [as_fraction(capacity)], set(), True)
    elif model_kind == "multiple-choice":
        check_limit("pareto_front_biobjective", len(items), KNAPSACK_LIMIT)
        b = as_fraction(capacity)
        model = _SetModel(tuple(items), [b], set(), True)
        masks = _choice_masks(items, b)
    elif model_kind in ("multiple-knapsack", "inverse-bpp", "conflict-inverse"):
        if model_kind == "multiple-knapsack":
            caps = [as_fraction(c) for c in capacities]
        else:
            caps = [as_fraction(capacity)] * int(k)
        _check_multi("pareto_front_biobjective", len(items), len(caps))
        pairs = _pairs(conflicts) if model_kind == "conflict-inverse" else set()
        model = _SetModel(tuple(items), caps, pairs, len(set(caps)) == 1)
    else:
        raise ValueError(f"unknown model kind {model_kind!r}; expected one of {MODEL_KINDS}")
    return _solve_set(model, objective, masks, front=True)
