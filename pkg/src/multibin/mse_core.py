"""Interval multiset estimates.

An estimate places ``eta`` elements on an ordinal scale ``1..l`` (level 1 is
best) and is stored in position form: ``counts[i]`` elements sit at level
``i + 1``.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch

INT64_MAX = 2**63 - 1


class Ordering(enum.Enum):
    BETTER = "better"
    WORSE = "worse"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class MsEstimate:
    counts: tuple[int, ...]

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        if not counts:
            raise ValueError("an estimate needs at least one level")
        if any(c < 0 for c in counts):
            raise ValueError(f"negative count in {counts}")
        object.__setattr__(self, "counts", counts)

    @classmethod
    def of(cls, *counts: int) -> "MsEstimate":
        return cls(tuple(counts))

    @classmethod
    def from_elements(cls, l: int, elements: Iterable[int]) -> "MsEstimate":
        counts = [0] * l
        for e in elements:
            if not 1 <= e <= l:
                raise ValueError(f"level {e} outside [1, {l}]")
            counts[e - 1] += 1
        return cls(tuple(counts))

    @classmethod
    def parse(cls, text: str) -> "MsEstimate":
        """Read ``"l,eta:[c1,...,cl]"`` or a bare ``"c1,...,cl"``."""
        m = re.fullmatch(r"\s*(\d+)\s*,\s*(\d+)\s*:\s*\[([^\]]*)\]\s*", text)
        if m:
            l, eta = int(m.group(1)), int(m.group(2))
            est = cls(tuple(int(x) for x in m.group(3).split(",")))
            if est.l != l or est.eta != eta:
                raise DimensionMismatch(f"{text!r}: header says ({l},{eta}), counts give ({est.l},{est.eta})")
            return est
        body = text.strip().strip("()[]")
        try:
            return cls(tuple(int(x) for x in body.split(",")))
        except ValueError as exc:
            raise ValueError(f"cannot read estimate {text!r}") from exc

    @property
    def l(self) -> int:
        return len(self.counts)

    @property
    def eta(self) -> int:
        return sum(self.counts)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i + 1 for i, c in enumerate(self.counts) if c > 0)

    @property
    def interval(self) -> bool:
        s = self.support
        return bool(s) and s[-1] - s[0] + 1 == len(s)

    def elements(self) -> tuple[int, ...]:
        """Levels of all elements in ascending order (best first)."""
        out: list[int] = []
        for i, c in enumerate(self.counts):
            out.extend([i + 1] * c)
        return tuple(out)

    def cumulative(self) -> tuple[int, ...]:
        return tuple(np.cumsum(self.counts).tolist())

    def text(self) -> str:
        return f"{self.l},{self.eta}:[{','.join(map(str, self.counts))}]"

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.counts)) + ")"


@dataclass(frozen=True)
class Proximity:
    delta_minus: int
    delta_plus: int

    @property
    def magnitude(self) -> int:
        return self.delta_minus + self.delta_plus

    def __abs__(self) -> int:
        return self.magnitude


def multiset_coefficient(l: int, eta: int) -> int:
    """Number of multisets of size ``eta`` over ``l`` levels."""
    if l < 1 or eta < 1:
        raise ValueError("l and eta must be positive")
    value = math.comb(l + eta - 1, eta)
    if value > INT64_MAX:
        raise OverflowError(f"multiset coefficient for l={l}, eta={eta} exceeds 64-bit range")
    return value


def canonical_key(e: MsEstimate) -> tuple:
    """Sort key of the canonical estimate order.

    Primary key is the level sum, which makes the order a linear extension of
    dominance (better estimates come first); narrower supports break ties,
    then counts in decreasing lexicographic order.
    """
    els = e.elements()
    s = e.support
    width = s[-1] - s[0] + 1 if s else 0
    return (sum(els), width, tuple(-c for c in e.counts))


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_scale(l: int, eta: int) -> list[MsEstimate]:
    """All interval estimates of cardinality ``eta`` over ``[1, l]`` in canonical order."""
    multiset_coefficient(l, eta)
    found = []
    for lo in range(l):
        for hi in range(lo, min(l, lo + eta)):
            width = hi - lo + 1
            for comp in _compositions(eta, width):
                counts = [0] * l
                counts[lo:hi + 1] = comp
                found.append(MsEstimate(tuple(counts)))
    found.sort(key=canonical_key)
    return found


def _check_pair(e1: MsEstimate, e2: MsEstimate) -> None:
    if e1.l != e2.l:
        raise DimensionMismatch(f"scale mismatch: {e1.l} vs {e2.l}")
    if e1.eta != e2.eta:
        raise DimensionMismatch(f"cardinality mismatch: {e1.eta} vs {e2.eta}")


def integrate(estimates: Sequence[MsEstimate]) -> MsEstimate:
    """Componentwise sum of position forms."""
    if not estimates:
        raise ValueError("integrate needs at least one estimate")
    l = estimates[0].l
    if any(e.l != l for e in estimates):
        raise DimensionMismatch("integrate: estimates on different scales")
    return MsEstimate(tuple(int(x) for x in np.sum([e.counts for e in estimates], axis=0)))


def proximity(e1: MsEstimate, e2: MsEstimate) -> Proximity:
    """Minimal numbers of one-level improvements / degradations turning e1 into e2."""
    _check_pair(e1, e2)
    a = np.asarray(e1.elements(), dtype=np.int64)
    b = np.asarray(e2.elements(), dtype=np.int64)
    diff = b - a
    return Proximity(int(-diff[diff < 0].sum()), int(diff[diff > 0].sum()))


def dominates(e1: MsEstimate, e2: MsEstimate) -> Ordering:
    _check_pair(e1, e2)
    if e1.counts == e2.counts:
        return Ordering.EQUAL
    a, b = e1.elements(), e2.elements()
    if all(x <= y for x, y in zip(a, b)):
        return Ordering.BETTER
    if all(x >= y for x, y in zip(a, b)):
        return Ordering.WORSE
    return Ordering.INCOMPARABLE


def compare(e1: MsEstimate, e2: MsEstimate) -> Ordering:
    """Dominance that also relates estimates of different cardinality.

    ``e1`` is at least as good as ``e2`` when, for every level t, it has at
    least as many elements at levels 1..t.  For equal cardinalities this is
    exactly :func:`dominates`; across cardinalities it lets integrated
    estimates of larger solutions win.
    """
    if e1.l != e2.l:
        raise DimensionMismatch(f"scale mismatch: {e1.l} vs {e2.l}")
    if e1.counts == e2.counts:
        return Ordering.EQUAL
    c1, c2 = np.cumsum(e1.counts), np.cumsum(e2.counts)
    if np.all(c1 >= c2):
        return Ordering.BETTER
    if np.all(c1 <= c2):
        return Ordering.WORSE
    return Ordering.INCOMPARABLE


def distance_table(scale: Sequence[MsEstimate], members: Sequence[MsEstimate]) -> np.ndarray:
    """``out[c, i] = |proximity(scale[c], members[i])|`` via sorted element sequences."""
    s = np.array([e.elements() for e in scale], dtype=np.int64)
    m = np.array([e.elements() for e in members], dtype=np.int64)
    if s.size == 0 or m.size == 0:
        return np.zeros((len(scale), len(members)), dtype=np.int64)
    return np.abs(s[:, None, :] - m[None, :, :]).sum(axis=2)


def _common_dims(E: Sequence[MsEstimate]) -> tuple[int, int]:
    if not E:
        raise ValueError("median of an empty set is undefined")
    l, eta = E[0].l, E[0].eta
    for e in E[1:]:
        _check_pair(E[0], e)
    return l, eta


def total_distance(M: MsEstimate, E: Sequence[MsEstimate]) -> int:
    return sum(proximity(M, e).magnitude for e in E)


def generalized_median(E: Sequence[MsEstimate]) -> MsEstimate:
    """Scale estimate minimising the summed one-step distance to ``E``.

    Candidates are the interval estimates of the common (l, eta); ties go to
    the first candidate in canonical order.
    """
    l, eta = _common_dims(E)
    scale = enumerate_scale(l, eta)
    totals = distance_table(scale, E).sum(axis=1)
    return scale[int(np.argmin(totals))]


def set_median(E: Sequence[MsEstimate]) -> MsEstimate:
    """Member of ``E`` minimising the summed distance to ``E`` (first in input order)."""
    _common_dims(E)
    totals = distance_table(E, E).sum(axis=1)
    return E[int(np.argmin(totals))]
