"""JSON instance files, fixtures and reports.

Every instance file is one JSON object with a ``kind`` tag.  Numbers are read
as exact rationals; ``"p/q"`` strings are accepted wherever a number is.
Schema problems are collected (not raised one at a time) and reported with
their JSON path and line.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Any

from .bpp_classic import Item, PackInstance, PackSolution
from .bpp_relational import RelationSet
from .coloring import ColoredGraph, QualityVector
from .errors import SchemaError
from .mse_core import MsEstimate
from .pipelines import ColorChangeTable, ProductionItem

KINDS = ("scale", "estimates", "pack", "graph", "messages", "production")
EXTRA_KEYS = ("note", "expected", "schematic_weights", "labels")


# ---------------------------------------------------------------- payloads

@dataclass(frozen=True)
class ScaleRequest:
    l: int
    eta: int


@dataclass(frozen=True)
class EstimateSet:
    estimates: tuple


@dataclass(frozen=True)
class PackPayload:
    instance: PackInstance
    relations: RelationSet | None = None
    capacities: tuple | None = None
    conflicts: tuple | None = None
    solution: PackSolution | None = None


@dataclass(frozen=True)
class MessageSet:
    T: Fraction
    items: tuple


@dataclass(frozen=True)
class ProductionSet:
    W: int
    T: int
    M: int
    table: ColorChangeTable
    items: tuple


@dataclass(frozen=True)
class InstanceFile:
    kind: str
    payload: Any
    extras: dict = field(default_factory=dict)

    def __eq__(self, other):
        return (isinstance(other, InstanceFile) and self.kind == other.kind
                and self.payload == other.payload and _plain(self.extras) == _plain(other.extras))


# ---------------------------------------------------------------- positions

def _positions(text: str) -> dict:
    """JSON path -> (line, column) of every value, from a light scan of well-formed text."""
    out: dict = {}
    dec = json.JSONDecoder()
    pos = 0
    n = len(text)

    def skip(i):
        while i < n and text[i] in " \t\r\n":
            i += 1
        return i

    def where(i):
        line = text.count("\n", 0, i) + 1
        return line, i - (text.rfind("\n", 0, i) + 1) + 1

    def value(i, path):
        i = skip(i)
        out[path] = where(i)
        if text[i] == "{":
            i = skip(i + 1)
            if text[i] == "}":
                return i + 1
            while True:
                key, i = json.decoder.scanstring(text, skip(i) + 1)
                i = skip(i) + 1  # colon
                i = value(i, f"{path}.{key}" if path else key)
                i = skip(i)
                if text[i] == ",":
                    i += 1
                    continue
                return i + 1
        if text[i] == "[":
            i = skip(i + 1)
            if text[i] == "]":
                return i + 1
            k = 0
            while True:
                i = value(i, f"{path}[{k}]")
                i = skip(i)
                k += 1
                if text[i] == ",":
                    i += 1
                    continue
                return i + 1
        _, end = dec.raw_decode(text, i)
        return end

    value(pos, "")
    return out


# ---------------------------------------------------------------- parsing

class _Checker:
    def __init__(self, pos: dict):
        self.pos = pos
        self.problems: list[str] = []

    def fail(self, path: str, msg: str) -> None:
        loc = self.pos.get(path)
        at = f" (line {loc[0]}, column {loc[1]})" if loc else ""
        self.problems.append(f"{path or '<root>'}{at}: {msg}")

    def number(self, v, path, positive=False, nonneg=False, integer=False):
        try:
            if isinstance(v, bool) or v is None:
                raise TypeError
            x = Fraction(v) if not isinstance(v, Fraction) else v
        except (TypeError, ValueError, ZeroDivisionError):
            self.fail(path, f"expected a number, got {v!r}")
            return None
        if integer and x.denominator != 1:
            self.fail(path, "must be an integer")
            return None
        if positive and x <= 0:
            self.fail(path, f"{path.rsplit('.', 1)[-1]} must be positive")
            return None
        if nonneg and x < 0:
            self.fail(path, f"{path.rsplit('.', 1)[-1]} must be non-negative")
            return None
        return int(x) if integer else x

    def estimate(self, v, path, dims=None):
        try:
            e = MsEstimate.parse(v) if isinstance(v, str) else MsEstimate(tuple(int(x) for x in v))
        except (TypeError, ValueError) as exc:
            self.fail(path, f"bad estimate: {exc}")
            return None
        if dims is not None and (e.l, e.eta) != dims:
            self.fail(path, f"estimate on scale ({e.l},{e.eta}) but the file declares {dims}")
            return None
        return e

    def require(self, d, key, path):
        if key not in d:
            self.fail(path, f"missing required field {key!r}")
            return None
        return d[key]


def _ident(v):
    return v if isinstance(v, (int, str)) else str(v)


def _parse_items(c: _Checker, raw, path: str, dims) -> list[Item]:
    if not isinstance(raw, list):
        c.fail(path, "expected a list of items")
        return []
    items = []
    for k, d in enumerate(raw):
        p = f"{path}[{k}]"
        if not isinstance(d, dict):
            c.fail(p, "expected an object")
            continue
        iid = c.require(d, "id", p)
        w = c.require(d, "weight", p)
        w = c.number(w, f"{p}.weight", positive=True) if w is not None else None
        kw: dict = {}
        if d.get("profit") is not None:
            kw["profit"] = c.number(d["profit"], f"{p}.profit")
        if d.get("importance") is not None:
            kw["importance"] = c.number(d["importance"], f"{p}.importance")
        if d.get("wait_age") is not None:
            kw["wait_age"] = c.number(d["wait_age"], f"{p}.wait_age", nonneg=True, integer=True)
        for key in ("color", "group"):
            if d.get(key) is not None:
                kw[key] = d[key]
        if d.get("length") is not None:
            kw["length"] = c.number(d["length"], f"{p}.length", positive=True)
        if d.get("estimate") is not None:
            kw["estimate"] = c.estimate(d["estimate"], f"{p}.estimate", dims)
        if d.get("position_estimates") is not None:
            kw["position_estimates"] = {int(b): c.estimate(e, f"{p}.position_estimates.{b}", dims)
                                        for b, e in d["position_estimates"].items()}
        if d.get("position_profits") is not None:
            kw["position_profits"] = {int(b): c.number(v, f"{p}.position_profits.{b}")
                                      for b, v in d["position_profits"].items()}
        unknown = set(d) - {"id", "weight", "profit", "importance", "wait_age", "color", "group", "length",
                            "estimate", "position_estimates", "position_profits"}
        for key in sorted(unknown):
            c.fail(f"{p}.{key}", "unknown field")
        if iid is None or w is None or any(v is None for v in kw.values()):
            continue
        items.append(Item(_ident(iid), w, **kw))
    ids = [it.id for it in items]
    for k, i in enumerate(ids):
        if i in ids[:k]:
            c.fail(f"{path}[{k}].id", f"duplicate item id {i!r}")
    return items


def _matrix_pairs(c, spec, path, known):
    """Either an edge/triple list or {"items": [...], "matrix": [[...]]}."""
    if isinstance(spec, dict):
        ids = [_ident(i) for i in spec.get("items", [])]
        for k, i in enumerate(ids):
            if i not in known:
                c.fail(f"{path}.items[{k}]", f"unknown item id {i!r}")
        return ids, spec.get("matrix", [])
    return None, spec


def _parse_relations(c: _Checker, raw, path: str, known: set, bins: int | None):
    if not isinstance(raw, dict):
        c.fail(path, "expected an object")
        return None
    kw: dict = {}

    def check_ids(pairs, p):
        good = []
        for k, e in enumerate(pairs):
            if not isinstance(e, list) or len(e) < 2:
                c.fail(f"{p}[{k}]", "expected a pair")
                continue
            a, b = _ident(e[0]), _ident(e[1])
            bad = [x for x in (a, b) if x not in known]
            if bad:
                c.fail(f"{p}[{k}]", f"unknown item id {bad[0]!r}")
                continue
            good.append((a, b) + tuple(e[2:]))
        return good

    if "correspondence" in raw:
        sp = raw["correspondence"]
        p = f"{path}.correspondence"
        grades = {}
        if isinstance(sp, dict):
            ids = [_ident(i) for i in sp.get("items", [])]
            bl = sp.get("bins", [])
            for r, (i, row) in enumerate(zip(ids, sp.get("grades", []))):
                if i not in known:
                    c.fail(f"{p}.items[{r}]", f"unknown item id {i!r}")
                for b, g in zip(bl, row):
                    if g is not None:
                        grades[(i, int(b))] = int(g)
        else:
            for a, b, g in check_ids(sp, p):
                grades[(a, int(b))] = int(g)
        kw["correspondence"] = grades
    for role in ("conflicts", "compatibility"):
        if role not in raw:
            continue
        ids, body = _matrix_pairs(c, raw[role], f"{path}.{role}", known)
        if ids is not None:
            kw[role] = getattr(RelationSet.from_matrix(ids, body, role), role)
        elif role == "conflicts":
            kw[role] = frozenset(frozenset(e[:2]) for e in check_ids(body, f"{path}.{role}"))
        else:
            grades: dict = {}
            for a, b, *g in check_ids(body, f"{path}.{role}"):
                key = frozenset((a, b))
                grades[key] = min(int(g[0]), grades.get(key, int(g[0])))
            kw[role] = grades
    for key in ("precedence", "item_dominance", "neighborhood"):
        if key in raw:
            kw[key] = tuple(e[:2] for e in check_ids(raw[key], f"{path}.{key}"))
    if "bin_importance" in raw:
        kw["bin_importance"] = tuple(tuple(e) for e in raw["bin_importance"])
    for key in sorted(set(raw) - {"correspondence", "conflicts", "compatibility", "precedence",
                                  "item_dominance", "neighborhood", "bin_importance"}):
        c.fail(f"{path}.{key}", "unknown relation")
    try:
        return RelationSet(**kw)
    except ValueError as exc:
        c.fail(path, str(exc))
        return None


def _parse_pack(c: _Checker, d: dict):
    dims = None
    if "estimates" in d:
        dims = (d["estimates"].get("l"), d["estimates"].get("eta"))
    cap = c.number(c.require(d, "capacity", ""), "capacity", positive=True) if "capacity" in d else None
    if "capacity" not in d:
        c.require(d, "capacity", "")
    items = _parse_items(c, c.require(d, "items", "") or [], "items", dims)
    max_bins = None
    if d.get("max_bins") is not None:
        max_bins = c.number(d["max_bins"], "max_bins", positive=True, integer=True)
    caps = None
    if d.get("capacities") is not None:
        caps = tuple(c.number(x, f"capacities[{k}]", positive=True) for k, x in enumerate(d["capacities"]))
    known = {it.id for it in items}
    if cap is not None:
        for k, it in enumerate(items):
            if it.weight > cap and caps is None:
                c.fail(f"items[{k}].weight", f"weight {it.weight} exceeds capacity {cap}")
    relations = _parse_relations(c, d["relations"], "relations", known, max_bins) if "relations" in d else None
    conflicts = None
    if d.get("conflicts") is not None:
        conflicts = []
        for k, e in enumerate(d["conflicts"]):
            a, b = _ident(e[0]), _ident(e[1])
            if a not in known or b not in known:
                c.fail(f"conflicts[{k}]", f"unknown item id {(a if a not in known else b)!r}")
            conflicts.append((a, b))
        conflicts = tuple(conflicts)
    solution = None
    if d.get("solution") is not None:
        s = d["solution"]
        for k, b in enumerate(s.get("bins", [])):
            for j, i in enumerate(b):
                if _ident(i) not in known:
                    c.fail(f"solution.bins[{k}][{j}]", f"unknown item id {i!r}")
        solution = PackSolution(tuple(tuple(_ident(i) for i in b) for b in s.get("bins", [])),
                                tuple(_ident(i) for i in s.get("unassigned", [])))
    if c.problems:
        return None
    big = max(caps) if caps else cap
    inst = PackInstance(tuple(items), big, max_bins) if caps else PackInstance(tuple(items), cap, max_bins)
    return PackPayload(inst, relations, caps, conflicts, solution)


def _parse_graph(c: _Checker, d: dict):
    vs = c.require(d, "vertices", "")
    if not isinstance(vs, list):
        c.fail("vertices", "expected a list")
        return None
    vs = [_ident(v) for v in vs]
    known = set(vs)
    edges = []
    for k, e in enumerate(d.get("edges", [])):
        a, b = _ident(e[0]), _ident(e[1])
        if a not in known or b not in known:
            c.fail(f"edges[{k}]", f"unknown vertex {(a if a not in known else b)!r}")
        elif a == b:
            c.fail(f"edges[{k}]", "self-loop")
        else:
            edges.append(frozenset((a, b)))
    kw: dict = {}
    if d.get("parts") is not None:
        parts = tuple(tuple(_ident(v) for v in p) for p in d["parts"])
        flat = [v for p in parts for v in p]
        if sorted(map(str, flat)) != sorted(map(str, vs)) or len(set(flat)) != len(flat):
            c.fail("parts", "parts must cover the vertices disjointly")
        kw["parts"] = parts
    if d.get("candidates") is not None:
        cand = {}
        for v, cs in d["candidates"].items():
            v = _ident(v) if _ident(v) in known else (int(v) if str(v).isdigit() and int(v) in known else v)
            if v not in known:
                c.fail(f"candidates.{v}", f"unknown vertex {v!r}")
                continue
            cand[v] = tuple((col, int(g)) for col, g in cs)
        kw["candidates"] = cand
    if d.get("compatibility") is not None:
        sp = d["compatibility"]
        grades: dict = {}
        if isinstance(sp, dict):
            cols = sp.get("columns", [])
            for r, row in sp.get("rows", {}).items():
                for col, g in zip(cols, row):
                    if g is not None:
                        grades[frozenset((r, col))] = int(g)
        else:
            for a, b, g in sp:
                grades[frozenset((a, b))] = int(g)
        kw["compatibility"] = grades
    if d.get("color_weights") is not None:
        kw["color_weights"] = {k: (tuple(Fraction(x) for x in v) if isinstance(v, list) else Fraction(v))
                               for k, v in d["color_weights"].items()}
    for key in ("best_compat", "levels"):
        if d.get(key) is not None:
            kw[key] = c.number(d[key], key, positive=True, integer=True)
    if c.problems:
        return None
    return ColoredGraph(tuple(vs), frozenset(edges), **kw)


def _parse_production(c: _Checker, d: dict):
    W = c.number(c.require(d, "W", ""), "W", positive=True, integer=True) if "W" in d else None
    T = c.number(d.get("T", 0), "T", positive=True, integer=True) if "T" in d else None
    M = c.number(d.get("M", 1), "M", positive=True, integer=True)
    cc = c.require(d, "color_change", "")
    items = []
    for k, it in enumerate(d.get("items", [])):
        p = f"items[{k}]"
        w = c.number(it.get("width"), f"{p}.width", positive=True, integer=True)
        ln = c.number(it.get("length"), f"{p}.length", positive=True, integer=True)
        if W is not None and w is not None and w > W:
            c.fail(f"{p}.width", f"width {w} exceeds bar width {W}")
        if w is None or ln is None:
            continue
        items.append(ProductionItem(_ident(it["id"]), w, ln, it.get("color"), it.get("general_item"),
                                    it.get("machine"), it.get("period")))
    if W is None:
        c.require(d, "W", "")
    if c.problems or cc is None:
        return None
    try:
        table = ColorChangeTable(tuple(cc["colors"]), tuple(tuple(r) for r in cc["cost"]))
    except (KeyError, ValueError) as exc:
        c.fail("color_change", str(exc))
        return None
    unknown = sorted({it.color for it in items} - set(table.colors), key=str)
    for col in unknown:
        c.fail("items", f"color {col!r} missing from the change table")
    if c.problems:
        return None
    return ProductionSet(W, T, M, table, tuple(items))


def parse_instance(text: str) -> InstanceFile:
    """Validated instance; :class:`SchemaError` lists every problem found."""
    try:
        d = json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(d, dict):
        raise SchemaError("top level must be an object")
    c = _Checker(_positions(text))
    kind = d.get("kind")
    if kind not in KINDS:
        c.fail("kind" if "kind" in d else "", f"kind must be one of {KINDS}, got {kind!r}")
        raise SchemaError(c.problems)
    extras = {k: d[k] for k in EXTRA_KEYS if k in d}
    body = {k: v for k, v in d.items() if k not in EXTRA_KEYS and k != "kind"}
    payload = None
    try:
        if kind == "scale":
            payload = ScaleRequest(c.number(body.get("l"), "l", positive=True, integer=True),
                                   c.number(body.get("eta"), "eta", positive=True, integer=True))
        elif kind == "estimates":
            raw = c.require(body, "estimates", "") or []
            ests = [c.estimate(e, f"estimates[{k}]") for k, e in enumerate(raw)]
            dims = {(e.l, e.eta) for e in ests if e is not None}
            if len(dims) > 1:
                c.fail("estimates", f"estimates mix scales {sorted(dims)}")
            payload = EstimateSet(tuple(ests))
        elif kind == "pack":
            payload = _parse_pack(c, body)
        elif kind == "graph":
            payload = _parse_graph(c, body)
        elif kind == "messages":
            T = c.number(c.require(body, "T", ""), "T", positive=True)
            items = _parse_items(c, c.require(body, "items", "") or [], "items", None)
            payload = MessageSet(T, tuple(items))
        else:
            payload = _parse_production(c, body)
    except ValueError as exc:
        c.fail("", str(exc))
    if c.problems:
        raise SchemaError(c.problems)
    return InstanceFile(kind, payload, extras)


def load_instance(path) -> InstanceFile:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def fixture_names() -> list[str]:
    return sorted(p.name for p in resources.files("multibin").joinpath("fixtures").iterdir()
                  if p.name.endswith(".json"))


def fixture_text(name: str) -> str:
    """Bundled fixture by file name or unique prefix (``"table13"``)."""
    names = fixture_names()
    match = [n for n in names if n == name or n == f"{name}.json"] or [n for n in names if n.startswith(name)]
    if len(match) != 1:
        raise FileNotFoundError(f"no unique fixture {name!r}; have {names}")
    return resources.files("multibin").joinpath("fixtures", match[0]).read_text(encoding="utf-8")


def load_fixture(name: str) -> InstanceFile:
    return parse_instance(fixture_text(name))


# ---------------------------------------------------------------- emission

def number(x):
    """Exact rational as a JSON value: int, float that reads back exactly, or "p/q"."""
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return int(x.numerator)
        f = float(x)
        return f if Fraction(repr(f)) == x else f"{x.numerator}/{x.denominator}"
    return x


def _plain(x):
    """Convert library values into JSON-ready structures with deterministic order."""
    if dataclasses.is_dataclass(x) and not isinstance(x, type):
        if isinstance(x, MsEstimate):
            return x.text()
        if isinstance(x, QualityVector):
            return str(x)
        if isinstance(x, PackSolution):
            return {"bins": _plain(x.bins), "unassigned": _plain(x.unassigned)}
        return {f.name: _plain(getattr(x, f.name)) for f in dataclasses.fields(x)}
    if isinstance(x, Fraction):
        return number(x)
    if isinstance(x, dict):
        return {str(k) if not isinstance(k, str) else k: _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted((_plain(v) for v in x), key=lambda v: json.dumps(v, sort_keys=True))
    if hasattr(x, "value") and hasattr(x, "name") and type(x).__module__.startswith("multibin"):
        return x.value
    return x


def _item_dict(it: Item) -> dict:
    d: dict = {"id": it.id, "weight": number(it.weight)}
    for key in ("profit", "importance"):
        if getattr(it, key) is not None:
            d[key] = number(getattr(it, key))
    if it.wait_age:
        d["wait_age"] = it.wait_age
    for key in ("color", "group"):
        if getattr(it, key) is not None:
            d[key] = getattr(it, key)
    if it.length is not None:
        d["length"] = number(it.length)
    if it.estimate is not None:
        d["estimate"] = it.estimate.text()
    if it.position_estimates is not None:
        d["position_estimates"] = {str(b): e.text() for b, e in it.position_estimates.items()}
    if it.position_profits is not None:
        d["position_profits"] = {str(b): number(v) for b, v in it.position_profits.items()}
    return d


def _relations_dict(r: RelationSet, order: list) -> dict:
    pos = {i: k for k, i in enumerate(order)}

    def pair(p):
        return sorted(p, key=lambda i: pos.get(i, len(pos)))

    d: dict = {}
    if r.correspondence is not None:
        bins = sorted({b for _, b in r.correspondence})
        items = [i for i in order if any((i, b) in r.correspondence for b in bins)]
        d["correspondence"] = {"items": items, "bins": bins,
                               "grades": [[r.correspondence.get((i, b)) for b in bins] for i in items]}
    if r.conflicts:
        d["conflicts"] = sorted((pair(p) for p in r.conflicts), key=lambda e: [pos[i] for i in e])
    if r.compatibility:
        d["compatibility"] = sorted((pair(p) + [g] for p, g in r.compatibility.items()),
                                    key=lambda e: [pos[i] for i in e[:2]])
    for key in ("precedence", "item_dominance", "neighborhood", "bin_importance"):
        if getattr(r, key):
            d[key] = [list(e) for e in getattr(r, key)]
    return d


def instance_dict(f: InstanceFile) -> dict:
    p = f.payload
    d: dict = {"kind": f.kind}
    if f.kind == "scale":
        d.update(l=p.l, eta=p.eta)
    elif f.kind == "estimates":
        d["estimates"] = [e.text() for e in p.estimates]
    elif f.kind == "pack":
        inst = p.instance
        if p.capacities is None:
            d["capacity"] = number(inst.capacity)
        else:
            d["capacity"] = number(inst.capacity)
            d["capacities"] = [number(x) for x in p.capacities]
        if inst.max_bins is not None:
            d["max_bins"] = inst.max_bins
        d["items"] = [_item_dict(it) for it in inst.items]
        if p.relations is not None:
            d["relations"] = _relations_dict(p.relations, [it.id for it in inst.items])
        if p.conflicts is not None:
            d["conflicts"] = [list(e) for e in p.conflicts]
        if p.solution is not None:
            d["solution"] = {"bins": [list(b) for b in p.solution.bins]}
            if p.solution.unassigned:
                d["solution"]["unassigned"] = list(p.solution.unassigned)
    elif f.kind == "graph":
        g = p
        d["vertices"] = list(g.vertices)
        vpos = {v: k for k, v in enumerate(g.vertices)}
        d["edges"] = sorted((sorted(e, key=vpos.get) for e in g.edges), key=lambda e: [vpos[v] for v in e])
        if g.parts is not None:
            d["parts"] = [list(x) for x in g.parts]
        if g.levels != 3:
            d["levels"] = g.levels
        if g.best_compat != 4:
            d["best_compat"] = g.best_compat
        if g.candidates is not None:
            d["candidates"] = {str(v): [list(c) for c in cs] for v, cs in g.candidates.items()}
        if g.compatibility:
            d["compatibility"] = sorted((sorted(map(str, k)) if len(k) == 2 else [str(next(iter(k)))] * 2) + [gr]
                                        for k, gr in g.compatibility.items())
        if g.color_weights is not None:
            d["color_weights"] = {str(c): ([number(x) for x in w] if isinstance(w, tuple) else number(w))
                                  for c, w in g.color_weights.items()}
    elif f.kind == "messages":
        d["T"] = number(p.T)
        d["items"] = [_item_dict(it) for it in p.items]
    else:
        d.update(W=p.W, T=p.T, M=p.M)
        d["color_change"] = {"colors": list(p.table.colors), "cost": [list(r) for r in p.table.cost]}
        d["items"] = [{k: v for k, v in dataclasses.asdict(it).items() if v is not None} for it in p.items]
    for k in EXTRA_KEYS:
        if k in f.extras:
            d[k] = _plain(f.extras[k])
    return d


def emit_instance(f: InstanceFile) -> str:
    return json.dumps(instance_dict(f), indent=1) + "\n"


def digest(f: InstanceFile) -> str:
    body = {k: v for k, v in instance_dict(f).items() if k not in EXTRA_KEYS}
    return hashlib.sha256(json.dumps(body, sort_keys=True).encode()).hexdigest()[:16]


@dataclass
class Report:
    solver: str
    instance_digest: str | None = None
    solution: Any = None
    objective: Any = None
    metrics: dict = field(default_factory=dict)
    wall_time: float | None = None
    oracle: dict | None = None

    def to_dict(self, timing: bool = False) -> dict:
        d: dict = {"solver": self.solver}
        if self.instance_digest is not None:
            d["instance_digest"] = self.instance_digest
        if self.solution is not None:
            d["solution"] = _plain(self.solution)
        if self.objective is not None:
            d["objective"] = _plain(self.objective)
        if self.metrics:
            d["metrics"] = _plain(self.metrics)
        if self.oracle is not None:
            d["oracle"] = _plain(self.oracle)
        if timing and self.wall_time is not None:
            d["wall_time"] = round(self.wall_time, 6)
        return d


def _human(value, indent: int = 0) -> list[str]:
    pad = "  " * indent
    if isinstance(value, dict):
        if not value:
            return [pad + "{}"]
        width = max(len(str(k)) for k in value)
        lines = []
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v and not _flat_list(v):
                lines.append(f"{pad}{str(k)}:")
                lines.extend(_human(v, indent + 1))
            else:
                lines.append(f"{pad}{(str(k) + ':').ljust(width + 1)} {_inline(v)}")
        return lines
    if isinstance(value, list):
        lines = []
        for v in value:
            if isinstance(v, (dict, list)) and v and not _flat_list(v):
                lines.append(pad + "-")
                lines.extend(_human(v, indent + 1))
            else:
                lines.append(f"{pad}- {_inline(v)}")
        return lines
    return [pad + _inline(value)]


def _flat_list(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) or _flat_list(x) for x in v)


def _inline(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_inline(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_inline(x)}" for k, x in v.items()) + "}"
    if v is None:
        return "-"
    return str(v)


def emit_report(report: Report, fmt: str = "human", timing: bool = False) -> str:
    d = report.to_dict(timing)
    if fmt == "machine":
        return json.dumps(d, indent=1) + "\n"
    if fmt != "human":
        raise ValueError(f"unknown format {fmt!r}")
    return "\n".join(_human(d)) + "\n"


def parse_report(text: str) -> dict:
    return json.loads(text)
