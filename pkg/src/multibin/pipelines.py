"""Two planning pipelines built on the packing solvers.

Production: group items by color, bundle each color into width-bounded
general items, pack general items into machine-period slots, then order each
machine's work to keep color changes cheap.

Messages: choose which messages to send in a period of length ``T``, order
them smallest weight first, and age whatever has to wait.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Sequence

import numpy as np

from . import kernels
from .bpp_classic import Item, as_fraction, int_arrays
from .errors import InfeasibleError, check_limit
from .mse_packing import knapsack_mse, maximal_rows

ORDER_LIMIT = 12
SELECT_LIMIT = 15


# ---------------------------------------------------------------- production

@dataclass(frozen=True)
class ProductionItem:
    id: Any
    width: int
    length: int
    color: Any
    general_item: str | None = None
    machine: int | None = None
    period: int | None = None

    def __post_init__(self):
        if self.width <= 0 or self.length <= 0:
            raise ValueError(f"item {self.id!r}: width and length must be positive")


@dataclass(frozen=True)
class ColorChangeTable:
    """Directed change costs, ``cost[i][j]`` for switching from ``colors[i]`` to ``colors[j]``."""

    colors: tuple
    cost: tuple

    def __post_init__(self):
        object.__setattr__(self, "colors", tuple(self.colors))
        object.__setattr__(self, "cost", tuple(tuple(int(x) for x in row) for row in self.cost))
        k = len(self.colors)
        if len(self.cost) != k or any(len(r) != k for r in self.cost):
            raise ValueError("change-cost table must be square over its colors")
        if any(x < 0 for r in self.cost for x in r):
            raise ValueError("change costs must be non-negative")

    def __call__(self, a, b) -> int:
        return self.cost[self.colors.index(a)][self.colors.index(b)]


@dataclass(frozen=True)
class GeneralItem:
    label: str
    color: Any
    lanes: tuple            # tuple of tuples of item ids, stacked along the length
    lane_widths: tuple
    lane_lengths: tuple

    @property
    def width(self) -> int:
        return sum(self.lane_widths)

    @property
    def duration(self) -> int:
        return max(self.lane_lengths)

    @property
    def members(self) -> tuple:
        return tuple(sorted(i for lane in self.lanes for i in lane))

    @property
    def area(self) -> int:
        return sum(self.lane_widths[k] * self.lane_lengths[k] for k in range(len(self.lanes)))


def roman(n: int) -> str:
    out = []
    for value, sym in ((1000, "M"), (900, "CM"), (500, "D"), (400, "CD"), (100, "C"), (90, "XC"),
                       (50, "L"), (40, "XL"), (10, "X"), (9, "IX"), (5, "V"), (4, "IV"), (1, "I")):
        while n >= value:
            out.append(sym)
            n -= value
    return "".join(out)


def group_by_color(items: Sequence[ProductionItem]) -> dict:
    """Colors in order of first appearance, members in input order."""
    groups: dict = {}
    for it in items:
        groups.setdefault(it.color, []).append(it)
    return groups


def _lanes_ffd(lanes: list, W: int) -> list[list]:
    # lanes: (width, length, ids); first fit decreasing on width, ties by first id
    order = sorted(lanes, key=lambda ln: (-ln[0], ln[2][0]))
    bundles: list[list] = []
    used: list[int] = []
    for ln in order:
        for k in range(len(bundles)):
            if used[k] + ln[0] <= W:
                bundles[k].append(ln)
                used[k] += ln[0]
                break
        else:
            bundles.append([ln])
            used.append(ln[0])
    return bundles


def form_general_items(group: Sequence[ProductionItem], W: int, first_label: int = 1) -> list[GeneralItem]:
    """Bundle one color's items into general items of total width at most ``W``.

    Items of equal length may share a lane (width = widest member, length =
    sum of lengths).  Sharing is used only when it yields fewer general items
    than packing every item in its own lane.
    """
    for it in group:
        if it.width > W:
            raise InfeasibleError(f"item {it.id!r} is wider than the bar ({it.width} > {W})", [it.id])
    if not group:
        return []
    single = [(it.width, it.length, (it.id,)) for it in group]
    by_len: dict = {}
    for it in group:
        by_len.setdefault(it.length, []).append(it)
    merged = [(max(m.width for m in ms), sum(m.length for m in ms), tuple(m.id for m in ms)) for ms in by_len.values()]
    plain = _lanes_ffd(single, W)
    stacked = _lanes_ffd(merged, W)
    bundles = stacked if len(stacked) < len(plain) else plain
    color = group[0].color
    out = []
    for k, b in enumerate(bundles):
        out.append(GeneralItem(roman(first_label + k), color, tuple(ln[2] for ln in b),
                               tuple(ln[0] for ln in b), tuple(ln[1] for ln in b)))
    return out


def pack_periods(general_items: Sequence[GeneralItem], M: int, T: int) -> dict:
    """First fit decreasing by duration over slots (period 1 machine 1..M, period 2 ...).

    Returns ``label -> (machine, period)``.
    """
    if M < 1:
        raise ValueError("at least one machine is required")
    for g in general_items:
        if g.duration > T:
            raise InfeasibleError(f"general item {g.label} lasts {g.duration} > period length {T}", [g.label])
    pos = {g.label: k for k, g in enumerate(general_items)}
    order = sorted(general_items, key=lambda g: (-g.duration, pos[g.label]))
    used: list[int] = []
    out = {}
    for g in order:
        for b in range(len(used)):
            if used[b] + g.duration <= T:
                break
        else:
            used.append(0)
            b = len(used) - 1
        used[b] += g.duration
        out[g.label] = (b % M + 1, b // M + 1)
    return out


def sequence_cost(colors: Sequence, table: ColorChangeTable, start_color=None) -> int:
    seq = ([start_color] if start_color is not None else []) + list(colors)
    return sum(table(a, b) for a, b in zip(seq, seq[1:]))


def order_colors(sequence: Sequence, table: ColorChangeTable, start_color=None,
                 color_of=lambda g: g.color) -> tuple[list, int]:
    """Cheapest order of ``sequence`` under directed color-change costs.

    Exact open-path search over subsets.  Among optimal orders the
    lexicographically smallest sequence of input positions is returned, so
    free choices keep the input order.
    """
    seq = list(sequence)
    n = len(seq)
    check_limit("order_colors", n, ORDER_LIMIT)
    if n == 0:
        return [], 0
    cols = [color_of(g) for g in seq]
    cost = np.array([[table(a, b) for b in cols] for a in cols], dtype=np.int64)
    f = kernels.held_karp_suffix(cost)
    enter = [table(start_color, c) if start_color is not None else 0 for c in cols]
    first = min(range(n), key=lambda v: (enter[v] + f[1 << v, v], v))
    total = enter[first] + int(f[1 << first, first])
    path, mask, v = [first], 1 << first, first
    while len(path) < n:
        target = f[mask, v]
        u = next(u for u in range(n) if not (mask >> u) & 1 and cost[v, u] + f[mask | 1 << u, u] == target)
        path.append(u)
        mask |= 1 << u
        v = u
    return [seq[i] for i in path], total


@dataclass
class Plan:
    general_items: list
    placement: dict               # label -> (machine, period)
    schedules: dict               # machine -> list of (period, [labels in processing order])
    color_change_cost: int
    unused_area: int
    idle_time: int

    def general_item(self, label: str) -> GeneralItem:
        return next(g for g in self.general_items if g.label == label)


def plan_paper(items: Sequence[ProductionItem], W: int, T: int, M: int, table: ColorChangeTable,
               placement: Mapping | None = None) -> Plan:
    """Run the four production stages.

    ``placement`` (general-item label -> (machine, period)) replaces the
    period-packing stage when given.  Within a machine, each period's general
    items are ordered starting from the color the previous period ended on.
    Unused area and idle time are measured over every occupied machine-period
    slot of size ``W x T``.
    """
    gis: list[GeneralItem] = []
    for members in group_by_color(items).values():
        gis.extend(form_general_items(members, W, first_label=len(gis) + 1))
    if placement is None:
        placement = pack_periods(gis, M, T)
    else:
        placement = {k: tuple(v) for k, v in placement.items()}
        missing = [g.label for g in gis if g.label not in placement]
        if missing:
            raise InfeasibleError(f"placement lacks general items {missing}", missing)
    slots: dict = {}
    for g in gis:
        slots.setdefault(placement[g.label], []).append(g)
    area = {it.id: it.width * it.length for it in items}
    schedules: dict = {}
    total = unused = idle = 0
    for machine in sorted({m for m, _ in slots}):
        last = None
        schedules[machine] = []
        for period in sorted(p for m, p in slots if m == machine):
            ordered, cost = order_colors(slots[(machine, period)], table, start_color=last)
            total += cost
            last = ordered[-1].color
            schedules[machine].append((period, [g.label for g in ordered]))
            busy = sum(g.duration for g in ordered)
            if busy > T:
                raise InfeasibleError(f"machine {machine} period {period} runs {busy} > {T}")
            idle += T - busy
            unused += W * T - sum(area[i] for g in ordered for i in g.members)
    return Plan(gis, dict(placement), schedules, total, unused, idle)


# ---------------------------------------------------------------- messages

Message = Item


@dataclass(frozen=True)
class Schedule:
    order: tuple                  # message ids, processing order
    completion: tuple             # completion time of each position

    @property
    def mean(self) -> Fraction:
        return mean_completion(self)


def _schedule(msgs: Sequence[Item]) -> Schedule:
    t = Fraction(0)
    done = []
    for m in msgs:
        t += m.weight
        done.append(t)
    return Schedule(tuple(m.id for m in msgs), tuple(done))


def _id_key(m: Item):
    return (0, m.id, "") if isinstance(m.id, (int, Fraction)) else (1, 0, str(m.id))


def swf_order(messages: Sequence[Item]) -> Schedule:
    """Smallest weight first, ties by id."""
    return _schedule(sorted(messages, key=lambda m: (m.weight, _id_key(m))))


def schedule_in_order(messages: Sequence[Item]) -> Schedule:
    return _schedule(list(messages))


def mean_completion(schedule: Schedule | Sequence[Item]) -> Fraction:
    if not isinstance(schedule, Schedule):
        schedule = _schedule(list(schedule))
    if not schedule.completion:
        raise ValueError("mean completion of an empty schedule is undefined")
    return sum(schedule.completion, Fraction(0)) / len(schedule.completion)


@dataclass
class Selection:
    selected: tuple               # messages in processing (SWF) order
    wait: tuple                   # unselected messages with ages already increased
    front: list = field(default_factory=list)  # (ids, cardinality, total age) for count+age

    @property
    def schedule(self) -> Schedule:
        return _schedule(self.selected)


SELECT_OBJECTIVES = ("count", "count+age", "importance", "estimate")


def _finish(messages: Sequence[Item], chosen: set, front=None) -> Selection:
    sel = [m for m in messages if m.id in chosen]
    wait = tuple(dataclasses.replace(m, wait_age=m.wait_age + 1) for m in messages if m.id not in chosen)
    return Selection(tuple(sorted(sel, key=lambda m: (m.weight, _id_key(m)))), wait, front or [])


def _subset_masks(messages: Sequence[Item], T: Fraction) -> np.ndarray:
    n = len(messages)
    w, cap, _ = int_arrays([m.weight for m in messages], T)
    masks = np.arange(1 << n, dtype=np.int64)
    sums = kernels.subset_counts(masks, np.asarray(w, dtype=np.int64).reshape(n, 1))[:, 0]
    return masks[sums <= cap[0]]


def select_messages(messages: Sequence[Item], T, objective: str = "count") -> Selection:
    """Messages to send within period length ``T``; the rest wait one more period.

    ``count`` takes smallest weights first (exact for cardinality).
    ``count+age`` returns the front over (cardinality, total wait age) and
    selects its member with most messages.  ``importance`` maximizes total
    importance; ``estimate`` maximizes the integrated estimate.
    """
    T = as_fraction(T)
    msgs = list(messages)
    if objective == "count":
        chosen, load = set(), Fraction(0)
        for m in sorted(msgs, key=lambda m: (m.weight, _id_key(m))):
            if load + m.weight <= T:
                chosen.add(m.id)
                load += m.weight
        return _finish(msgs, chosen)
    if objective not in SELECT_OBJECTIVES:
        raise ValueError(f"unknown objective {objective!r}; expected one of {SELECT_OBJECTIVES}")
    check_limit(f"select_messages[{objective}]", len(msgs), SELECT_LIMIT)
    if objective == "importance":
        items = [dataclasses.replace(m, profit=m.importance if m.importance is not None else 0) for m in msgs]
        sol = knapsack_mse(items, T, "scalar")
        return _finish(msgs, set(sol.assignment))
    if objective == "estimate":
        sol = knapsack_mse(msgs, T, "integrated")
        return _finish(msgs, set(sol.assignment))
    n = len(msgs)
    masks = _subset_masks(msgs, T)
    ages = np.array([m.wait_age for m in msgs], dtype=np.int64).reshape(n, 1)
    card = kernels.subset_counts(masks, np.ones((n, 1), np.int64))[:, 0]
    age = kernels.subset_counts(masks, ages)[:, 0]
    pts = np.stack([card, age], axis=1)
    uniq, inv = np.unique(pts, axis=0, return_inverse=True)
    keep = maximal_rows(uniq)
    reps: dict = {}
    for r in np.flatnonzero(keep[inv.reshape(-1)]):
        pos = tuple(j for j in range(n) if (masks[r] >> j) & 1)
        g = int(inv.reshape(-1)[r])
        if g not in reps or pos < reps[g][0]:
            reps[g] = (pos, int(card[r]), int(age[r]))
    front = sorted(((tuple(msgs[j].id for j in pos), c, a) for pos, c, a in reps.values()),
                   key=lambda t: (-t[1], -t[2]))
    return _finish(msgs, set(front[0][0]) if front else set(), front)


@dataclass
class Layer:
    members: tuple                # ids in the layer, SWF order
    assigned: tuple
    skipped: tuple


def _dominates(a: Item, b: Item) -> bool:
    return a.weight <= b.weight and a.wait_age >= b.wait_age and (a.weight < b.weight or a.wait_age > b.wait_age)


def pareto_layers(messages: Sequence[Item]) -> list[list[Item]]:
    """Successive non-dominated layers under (smaller weight, larger wait age)."""
    rest = list(messages)
    layers = []
    while rest:
        layer = [m for m in rest if not any(_dominates(o, m) for o in rest if o is not m)]
        layers.append(layer)
        ids = {m.id for m in layer}
        rest = [m for m in rest if m.id not in ids]
    return layers


def pareto_layer_assign(messages: Sequence[Item], T) -> tuple[list[Layer], Selection]:
    """Fill a period layer by layer, each layer smallest weight first."""
    T = as_fraction(T)
    load = Fraction(0)
    trace = []
    chosen: set = set()
    for layer in pareto_layers(messages):
        layer = sorted(layer, key=lambda m: (m.weight, _id_key(m)))
        took, skipped = [], []
        for m in layer:
            if load + m.weight <= T:
                load += m.weight
                took.append(m.id)
            else:
                skipped.append(m.id)
        chosen |= set(took)
        trace.append(Layer(tuple(m.id for m in layer), tuple(took), tuple(skipped)))
    return trace, _finish(list(messages), chosen)


def simulate_periods(messages: Sequence[Item], T, periods: int, objective: str = "count",
                     arrivals: Mapping[int, Sequence[Item]] | None = None) -> list[Selection]:
    """Repeat selection period after period; waiting messages carry their increased age."""
    pending = list(messages)
    history = []
    for p in range(1, periods + 1):
        pending = pending + list((arrivals or {}).get(p, ()))
        if objective == "layers":
            _, sel = pareto_layer_assign(pending, T)
        else:
            sel = select_messages(pending, T, objective)
        history.append(sel)
        pending = list(sel.wait)
    return history
