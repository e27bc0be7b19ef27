"""One-dimensional bin packing: model, feasibility, fitting heuristics, exact search."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Hashable, Mapping, Sequence

import numpy as np

from . import kernels
from .errors import SizeLimitError, StructuralError, check_limit
from .mse_core import MsEstimate

ItemId = Hashable

EXACT_BPP_LIMIT = 20


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


@dataclass(frozen=True)
class Item:
    """An item with a weight and whatever optional attributes a model needs."""

    id: ItemId
    weight: Fraction
    profit: Fraction | None = None
    color: Any = None
    estimate: MsEstimate | None = None
    group: Any = None
    length: Fraction | None = None
    # bin number (1-based) -> per-position estimate / profit
    position_estimates: Mapping[int, MsEstimate] | None = None
    position_profits: Mapping[int, Fraction] | None = None
    wait_age: int = 0
    importance: Fraction | None = None

    def __post_init__(self):
        object.__setattr__(self, "weight", as_fraction(self.weight))
        if self.profit is not None:
            object.__setattr__(self, "profit", as_fraction(self.profit))
        if self.importance is not None:
            object.__setattr__(self, "importance", as_fraction(self.importance))
        if self.position_profits is not None:
            object.__setattr__(self, "position_profits", {int(k): as_fraction(v) for k, v in self.position_profits.items()})
        if self.wait_age < 0:
            raise ValueError(f"item {self.id!r}: wait_age must be non-negative")
        if self.weight <= 0:
            raise ValueError(f"item {self.id!r}: weight must be positive")


@dataclass(frozen=True)
class PackInstance:
    items: tuple[Item, ...]
    capacity: Fraction
    max_bins: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        object.__setattr__(self, "capacity", as_fraction(self.capacity))
        if self.capacity <= 0:
            raise ValueError("capacity must be positive")
        ids = [it.id for it in self.items]
        if len(set(ids)) != len(ids):
            raise ValueError("item ids must be unique")
        for it in self.items:
            if it.weight > self.capacity:
                raise ValueError(f"item {it.id!r}: weight {it.weight} exceeds capacity {self.capacity}")
        if self.max_bins is not None and self.max_bins < 1:
            raise ValueError("max_bins must be positive")

    @classmethod
    def from_weights(cls, weights: Sequence, capacity=1, max_bins=None, **extra) -> "PackInstance":
        """Items numbered 1..n in the given order."""
        items = []
        for i, w in enumerate(weights, start=1):
            kw = {k: v[i - 1] for k, v in extra.items()}
            items.append(Item(i, w, **kw))
        return cls(tuple(items), capacity, max_bins)

    @property
    def n(self) -> int:
        return len(self.items)

    def item(self, item_id: ItemId) -> Item:
        try:
            return self._index[item_id]
        except KeyError:
            raise StructuralError(f"unknown item id {item_id!r}") from None

    @property
    def _index(self) -> dict:
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = {it.id: it for it in self.items}
            object.__setattr__(self, "_idx", idx)
        return idx

    def position(self, item_id: ItemId) -> int:
        pos = self.__dict__.get("_pos")
        if pos is None:
            pos = {it.id: i for i, it in enumerate(self.items)}
            object.__setattr__(self, "_pos", pos)
        return pos[item_id]

    def total_weight(self) -> Fraction:
        return sum((it.weight for it in self.items), Fraction(0))


@dataclass(frozen=True)
class PackSolution:
    bins: tuple[tuple[ItemId, ...], ...]
    unassigned: tuple[ItemId, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "bins", tuple(tuple(b) for b in self.bins if len(b)))
        object.__setattr__(self, "unassigned", tuple(self.unassigned))

    @property
    def num_bins(self) -> int:
        return len(self.bins)

    def bin_of(self) -> dict:
        return {i: k for k, b in enumerate(self.bins) for i in b}

    def assigned(self) -> tuple:
        return tuple(i for b in self.bins for i in b)


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str
    bin: int | None = None
    amount: Fraction | None = None
    items: tuple = ()


@dataclass
class FeasibilityReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def scale_to_int(values: Sequence[Fraction]) -> tuple[list[int], int]:
    """Common-denominator integer images of exact rationals."""
    den = 1
    for v in values:
        den = math.lcm(den, as_fraction(v).denominator)
    return [int(as_fraction(v) * den) for v in values], den


def int_arrays(weights: Sequence[Fraction], *caps: Fraction):
    """Scale weights and capacities together; object arrays if int64 would overflow."""
    ints, _ = scale_to_int(list(weights) + list(caps))
    w, c = ints[: len(weights)], ints[len(weights):]
    if sum(w) + sum(c) < 2**62:
        return np.array(w, dtype=np.int64), np.array(c, dtype=np.int64), True
    return np.array(w, dtype=object), np.array(c, dtype=object), False


def validate(instance: PackInstance, solution: PackSolution, require_complete: bool = True) -> FeasibilityReport:
    """Check capacity, exact partition and bin-count constraints.

    Every violation is reported, bins numbered from 1.  Ids that do not belong
    to the instance raise :class:`StructuralError`.
    """
    report = FeasibilityReport()
    seen: dict = {}
    for k, b in enumerate(solution.bins, start=1):
        load = Fraction(0)
        for i in b:
            load += instance.item(i).weight
            seen[i] = seen.get(i, 0) + 1
        if load > instance.capacity:
            report.violations.append(Violation(
                "capacity", f"bin {k} overflow {load - instance.capacity}", k, load - instance.capacity, tuple(b)))
    for i in solution.unassigned:
        instance.item(i)
        seen[i] = seen.get(i, 0) + 1
    for it in instance.items:
        c = seen.get(it.id, 0)
        if c == 0:
            report.violations.append(Violation("partition", f"item {it.id!r} missing", items=(it.id,)))
        elif c > 1:
            report.violations.append(Violation("partition", f"item {it.id!r} appears {c} times", items=(it.id,)))
    if require_complete and solution.unassigned:
        report.violations.append(Violation(
            "partition", f"{len(solution.unassigned)} item(s) left unassigned", items=solution.unassigned))
    if instance.max_bins is not None and solution.num_bins > instance.max_bins:
        report.violations.append(Violation(
            "bin_count", f"{solution.num_bins} bins used, at most {instance.max_bins} allowed", amount=Fraction(solution.num_bins - instance.max_bins)))
    return report


POLICIES = ("NextFit", "FirstFit", "BestFit", "WorstFit")
ORDERS = ("AsGiven", "Decreasing")


def decreasing_order(items: Sequence[Item]) -> list[Item]:
    pos = {it.id: k for k, it in enumerate(items)}
    return sorted(items, key=lambda it: (-it.weight, _id_key(it.id), pos[it.id]))


def _id_key(i):
    return (0, i, "") if isinstance(i, (int, float, Fraction)) else (1, 0, str(i))


def fit_pack(instance: PackInstance, policy: str = "FirstFit", order: str = "Decreasing") -> PackSolution:
    """Classical online fitting rules, optionally after sorting by weight.

    Ties between equally good bins (BestFit/WorstFit) go to the lowest bin
    index.
    """
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}; expected one of {POLICIES}")
    if order not in ORDERS:
        raise ValueError(f"unknown order {order!r}; expected one of {ORDERS}")
    items = list(instance.items) if order == "AsGiven" else decreasing_order(instance.items)
    cap = instance.capacity
    bins: list[list] = []
    loads: list[Fraction] = []
    for it in items:
        w = it.weight
        target = None
        if policy == "NextFit":
            if bins and loads[-1] + w <= cap:
                target = len(bins) - 1
        else:
            best = None
            for k, load in enumerate(loads):
                if load + w > cap:
                    continue
                if policy == "FirstFit":
                    target = k
                    break
                residual = cap - load - w
                if best is None or (policy == "BestFit" and residual < best) or (policy == "WorstFit" and residual > best):
                    best, target = residual, k
        if target is None:
            bins.append([])
            loads.append(Fraction(0))
            target = len(bins) - 1
        bins[target].append(it.id)
        loads[target] += w
    return PackSolution(tuple(tuple(b) for b in bins))


def lower_bound(instance: PackInstance) -> int:
    """Continuous bound: ceil(total weight / capacity)."""
    return math.ceil(instance.total_weight() / instance.capacity)


def _solution_from_assignment(instance: PackInstance, order: Sequence[Item], assign) -> PackSolution:
    nb = int(max(assign)) + 1 if len(assign) else 0
    groups: list[list] = [[] for _ in range(nb)]
    for it, b in zip(order, assign):
        groups[int(b)].append(it.id)
    for g in groups:
        g.sort(key=instance.position)
    return PackSolution(tuple(tuple(g) for g in groups))


def exact_min_bins(instance: PackInstance, conflicts=None, _what: str = "exact_min_bins") -> PackSolution:
    """Provably minimal packing by branch and bound.

    ``conflicts`` (pairs of item ids) forbids co-binning; it is used by the
    relational layer and defaults to none.
    """
    check_limit(_what, instance.n, EXACT_BPP_LIMIT)
    if instance.n == 0:
        return PackSolution(())
    order = decreasing_order(instance.items)
    n = len(order)
    w, caps, native = int_arrays([it.weight for it in order], instance.capacity)
    cap = caps[0]
    conf = np.zeros((n, n), dtype=np.uint8)
    use_conf = False
    if conflicts:
        where = {it.id: k for k, it in enumerate(order)}
        for a, b in conflicts:
            if a == b:
                continue
            conf[where[a], where[b]] = conf[where[b], where[a]] = 1
            use_conf = True
    # incumbent: first fit decreasing honouring conflicts
    inc = np.zeros(n, dtype=np.int64)
    loads: list = []
    members: list[list[int]] = []
    for k in range(n):
        for b, load in enumerate(loads):
            if load + w[k] <= cap and not any(conf[k, j] for j in members[b]):
                inc[k] = b
                loads[b] += w[k]
                members[b].append(k)
                break
        else:
            inc[k] = len(loads)
            loads.append(w[k])
            members.append([k])
    lower = max(1, -(-int(sum(int(x) for x in w)) // int(cap)))
    kernel = kernels.bpp_branch_and_bound if native else kernels.bpp_branch_and_bound.py_func
    best, assign = kernel(w, cap, conf, use_conf, len(loads), inc, lower)
    return _solution_from_assignment(instance, order, assign)


__all__ = [
    "Item", "PackInstance", "PackSolution", "Violation", "FeasibilityReport",
    "validate", "fit_pack", "lower_bound", "exact_min_bins", "SizeLimitError",
    "POLICIES", "ORDERS", "as_fraction", "scale_to_int", "int_arrays",
]
