"""Command-line front end: ``multibin <command> [options]``.

Exit codes: 0 success, 1 infeasible (or oracle disagreement), 2 usage or
schema error, 3 size limit exceeded.
"""

from __future__ import annotations

import argparse
import itertools
import sys
import time
from fractions import Fraction

from . import bpp_classic as bc
from . import bpp_relational as rel
from . import coloring as col
from . import mse_core as mc
from . import mse_packing as mp
from . import oracles
from . import pipelines as pl
from .errors import InfeasibleError, MultibinError, SchemaError, SizeLimitError
from .instance_io import Report, digest, emit_report, fixture_text, load_instance, parse_instance

EXIT_OK, EXIT_INFEASIBLE, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3

SOLVE_MODELS = ("knapsack-mse", "multiple-choice-mse", "multiple-knapsack-mse", "gap-mse",
                "inverse-bpp-mse", "conflict-inverse-mse", "pareto")
PACK_ALGOS = ("FirstFit", "BestFit", "WorstFit", "NextFit", "exact", "conflict-exact", "conflict-greedy", "inverse")


class UsageError(MultibinError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(p: argparse.ArgumentParser, instance: bool = True) -> None:
    if instance:
        p.add_argument("--in", dest="infile", help="instance file")
        p.add_argument("--fixture", help="bundled fixture name, e.g. table13")
    p.add_argument("--out", help="write the report here instead of standard output")
    p.add_argument("--format", choices=("human", "machine"), default="human")
    p.add_argument("--oracle", action="store_true", help="cross-check against brute force")
    p.add_argument("--timing", action="store_true", help="include wall time in the report")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="multibin", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("scale", help="list interval estimates of a scale")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--eta", type=int, required=True)
    _common(p, instance=False)

    p = sub.add_parser("median", help="median of an estimate set")
    p.add_argument("--algo", choices=("generalized", "set"), default="generalized")
    _common(p)

    p = sub.add_parser("proximity", help="one-step-move distance between two estimates")
    p.add_argument("a", help='estimate, e.g. "3,3:[1,2,0]" or "(1,2,0)"')
    p.add_argument("b")
    _common(p, instance=False)

    p = sub.add_parser("pack", help="classic and relational bin packing")
    p.add_argument("--algo", choices=PACK_ALGOS, default="FirstFit")
    p.add_argument("--order", choices=bc.ORDERS, default="Decreasing")
    p.add_argument("--k", type=int, help="bin count for --algo inverse")
    _common(p)

    p = sub.add_parser("solve", help="multiset-estimate packing models")
    p.add_argument("model", choices=SOLVE_MODELS)
    p.add_argument("--objective", choices=mp.OBJECTIVES)
    p.add_argument("--k", type=int, help="bin count (defaults to max_bins)")
    p.add_argument("--algo", choices=mp.MODEL_KINDS, default="knapsack", help="model kind for pareto")
    p.add_argument("--relaxation", choices=("must_assign_all", "allow_partial"))
    _common(p)

    p = sub.add_parser("color", help="graph coloring")
    p.add_argument("--algo", choices=("chromatic", "count", "weighted", "compat"), default="chromatic")
    p.add_argument("--k", type=int, help="number of colors for --algo count")
    p.add_argument("--min-compat", type=int, default=1)
    _common(p)

    p = sub.add_parser("partition-color", help="one vertex per part, fewest colors")
    _common(p)

    p = sub.add_parser("pipeline", help="planning pipelines")
    p.add_argument("which", choices=("paper", "messages"))
    p.add_argument("--placement", choices=("pack", "labels"), default="pack",
                   help="paper: pack periods, or use the machine/period labels in the file")
    p.add_argument("--objective", choices=pl.SELECT_OBJECTIVES + ("layers",), default="count")
    p.add_argument("--periods", type=int, default=1)
    _common(p)

    p = sub.add_parser("oracle", help="random solver/oracle equivalence run")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=50)
    _common(p, instance=False)

    p = sub.add_parser("bench", help="compiled kernels against their Python fallback")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeat", type=int, default=3)
    _common(p, instance=False)
    return ap


# ---------------------------------------------------------------- helpers

def _load(args, kind: str | tuple):
    if args.infile and args.fixture:
        raise UsageError("give --in or --fixture, not both")
    if args.fixture:
        f = parse_instance(fixture_text(args.fixture))
    elif args.infile:
        try:
            f = load_instance(args.infile)
        except OSError as exc:
            raise UsageError(f"cannot read {args.infile}: {exc.strerror}") from None
    else:
        raise UsageError("an instance is required (--in or --fixture)")
    kinds = (kind,) if isinstance(kind, str) else kind
    if f.kind not in kinds:
        raise UsageError(f"expected a {' or '.join(kinds)} instance, got {f.kind!r}")
    return f


def _verdict(checks: dict) -> dict:
    return {"agree": all(checks.values()), "checks": checks}


def _conflicts(payload) -> list:
    pairs = []
    if payload.conflicts:
        pairs.extend(payload.conflicts)
    if payload.relations is not None and payload.relations.conflicts:
        pairs.extend(tuple(p) for p in payload.relations.conflicts)
    return pairs


def _positions(inst, pairs) -> list:
    return [(inst.position(a), inst.position(b)) for a, b in pairs]


# ---------------------------------------------------------------- commands

def cmd_scale(args) -> Report:
    ests = mc.enumerate_scale(args.l, args.eta)
    excluded = [m for m in oracles.all_multisets(args.l, args.eta) if not oracles.is_interval(m)]
    rep = Report("scale", solution=[str(e) for e in ests],
                 metrics={"estimates": len(ests), "multisets": mc.multiset_coefficient(args.l, args.eta),
                          "excluded": [str(tuple(m)) for m in excluded]})
    if args.oracle:
        want = sorted(tuple(m) for m in oracles.all_multisets(args.l, args.eta) if oracles.is_interval(m))
        rep.oracle = _verdict({"interval_members": sorted(e.counts for e in ests) == want})
    return rep


def cmd_median(args) -> Report:
    f = _load(args, "estimates")
    E = list(f.payload.estimates)
    m = mc.generalized_median(E) if args.algo == "generalized" else mc.set_median(E)
    total = mc.total_distance(m, E)
    rep = Report(f"median/{args.algo}", digest(f), str(m), total)
    if args.oracle:
        scan = E if args.algo == "set" else oracles.scale_members(E[0].l, E[0].eta)
        d = oracles.move_distances(E[0].l, E[0].eta)
        best = min(sum(d[s.counts, e.counts] for e in E) for s in scan)
        rep.oracle = _verdict({"total_distance": best == total})
    return rep


def cmd_proximity(args) -> Report:
    a, b = mc.MsEstimate.parse(args.a), mc.MsEstimate.parse(args.b)
    p = mc.proximity(a, b)
    rep = Report("proximity", solution={"delta_minus": p.delta_minus, "delta_plus": p.delta_plus},
                 objective=p.magnitude, metrics={"order": mc.dominates(a, b).value})
    if args.oracle:
        dist = oracles.move_distances(a.l, a.eta)
        rep.oracle = _verdict({"bfs_distance": dist.get((a.counts, b.counts)) == p.magnitude,
                               "split": oracles.proximity_split(a.counts, b.counts)
                               == (p.delta_minus, p.delta_plus)})
    return rep


def cmd_pack(args) -> Report:
    f = _load(args, "pack")
    inst = f.payload.instance
    pairs = _conflicts(f.payload)
    if args.algo in ("FirstFit", "BestFit", "WorstFit", "NextFit"):
        sol = bc.fit_pack(inst, args.algo, args.order)
    elif args.algo == "exact":
        sol = bc.exact_min_bins(inst)
    elif args.algo == "conflict-exact":
        sol = rel.conflict_pack(inst, pairs, "exact")
    elif args.algo == "conflict-greedy":
        sol = rel.conflict_pack(inst, pairs, "greedy")
    else:
        profits = {it.id: it.profit for it in inst.items if it.profit is not None} or None
        sol = rel.inverse_pack(inst, profits, k=args.k, conflicts=pairs or None)
    relations = f.payload.relations
    if relations is not None and relations.precedence:
        sol = rel.order_within_bins(sol, relations)
    report = bc.validate(inst, sol, require_complete=args.algo != "inverse")
    violations = list(report.violations)
    if relations is not None:
        violations += rel.check_constraints(inst, relations, sol)
    metrics = {"bins": sol.num_bins, "lower_bound": bc.lower_bound(inst),
               "violations": [f"{v.kind}: {v.detail}" for v in violations]}
    rep = Report(f"pack/{args.algo}", digest(f), sol, sol.num_bins, metrics)
    if args.oracle:
        w = [it.weight for it in inst.items]
        if args.algo == "inverse":
            k = args.k or inst.max_bins
            profits = [it.profit if it.profit is not None else Fraction(1) for it in inst.items]
            got = sum((profits[inst.position(i)] for i in sol.assigned()), Fraction(0))
            rep.oracle = _verdict({"max_profit": got == oracles.brute_max_profit(
                w, profits, [inst.capacity] * k, _positions(inst, pairs))})
        else:
            conf = _positions(inst, pairs) if args.algo.startswith("conflict") else []
            best = oracles.brute_min_bins(w, inst.capacity, conf)
            key = "min_bins" if args.algo in ("exact", "conflict-exact") else "not_below_optimum"
            ok = sol.num_bins == best if key == "min_bins" else sol.num_bins >= best
            rep.oracle = _verdict({key: ok})
            rep.oracle["optimum"] = best
    return rep


def _mse_dict(s: mp.MseSolution) -> dict:
    return {"assignment": {str(i): b for i, b in s.assignment.items()},
            "value": str(s.objective_value) if isinstance(s.objective_value, mc.MsEstimate) else s.objective_value,
            "cardinality": s.cardinality}


def cmd_solve(args) -> Report:
    f = _load(args, "pack")
    p = f.payload
    items = list(p.instance.items)
    model = args.model
    objective = args.objective or ("median" if model == "multiple-choice-mse"
                                   else "scalar" if model == "gap-mse" else "integrated")
    k = args.k or p.instance.max_bins
    b = p.instance.capacity
    relaxation = args.relaxation
    if model in ("multiple-knapsack-mse", "gap-mse") or (model == "pareto" and args.algo in ("multiple-knapsack", "gap")):
        if not p.capacities:
            raise UsageError(f"{model} needs a 'capacities' list in the instance")
    if model in ("inverse-bpp-mse", "conflict-inverse-mse") or (
            model == "pareto" and args.algo in ("inverse-bpp", "conflict-inverse")):
        if not k:
            raise UsageError(f"{model} needs --k or max_bins")
    if model == "knapsack-mse":
        sol = mp.knapsack_mse(items, b, objective)
    elif model == "multiple-choice-mse":
        sol = mp.multiple_choice_mse(items, b, objective)
    elif model == "multiple-knapsack-mse":
        sol = mp.multiple_knapsack_mse(items, p.capacities, objective)
    elif model == "gap-mse":
        relaxation = relaxation or "must_assign_all"
        sol = mp.generalized_assignment_mse(items, p.capacities, objective, relaxation)
    elif model == "inverse-bpp-mse":
        sol = mp.inverse_bpp_mse(items, k, b, objective)
    elif model == "conflict-inverse-mse":
        sol = mp.conflict_inverse_mse(items, k, b, _conflicts(p), objective)
    else:
        kind = args.algo
        if kind == "gap":
            relaxation = relaxation or "allow_partial"
        front = mp.pareto_front_biobjective(
            kind, items, capacity=b, capacities=p.capacities, k=k if kind in ("inverse-bpp", "conflict-inverse") else None,
            conflicts=_conflicts(p), objective=objective, relaxation=relaxation or "allow_partial")
        rep = Report(f"pareto/{kind}/{objective}", digest(f), metrics={"front": [_mse_dict(s) for s in front]})
        if args.oracle:
            okind = {"knapsack": "knapsack-mse", "multiple-choice": "multiple-choice-mse",
                     "multiple-knapsack": "multiple-knapsack-mse", "inverse-bpp": "inverse-bpp-mse",
                     "conflict-inverse": "conflict-inverse-mse", "gap": "gap-mse"}[kind]
            if kind == "gap":
                cands = oracles.brute_gap(items, p.capacities, objective, relaxation == "allow_partial")
                pts = oracles.front_points([(tuple(x for x in c if x >= 0), v) for c, v in cands], objective)
                rep.oracle = _verdict({"front": {s.key() for s in front} == pts})
            else:
                rep.oracle = _front_oracle(okind, items, objective, p, k, front)
        return rep
    rep = Report(f"{model}/{objective}", digest(f), _mse_dict(sol),
                 str(sol.objective_value) if isinstance(sol.objective_value, mc.MsEstimate) else sol.objective_value,
                 {"cardinality": sol.cardinality})
    if args.oracle:
        rep.oracle = _model_oracle(model, items, objective, p, k, relaxation, sol)
    return rep


def _candidates(model, items, objective, payload, k):
    inst = payload.instance
    ws = [it.weight for it in items]
    ests = [it.estimate for it in items]
    profits = [it.profit for it in items]
    groups, conflicts = None, ()
    if model in ("knapsack-mse", "multiple-choice-mse"):
        caps = [inst.capacity]
        if model == "multiple-choice-mse":
            groups = [it.group for it in items]
    elif model == "multiple-knapsack-mse":
        caps = list(payload.capacities)
    else:
        caps = [inst.capacity] * k
        if model == "conflict-inverse-mse":
            conflicts = _positions(inst, _conflicts(payload))
    keep_empty = objective != "median" and groups is None
    return [(s, oracles.set_objective(ests, profits, s, objective))
            for s in oracles.feasible_sets(ws, caps, conflicts, groups) if s or keep_empty]


def _model_oracle(model, items, objective, payload, k, relaxation, sol) -> dict:
    if model == "gap-mse":
        cands = oracles.brute_gap(items, payload.capacities, objective, relaxation == "allow_partial")
        best = oracles.choose(cands, objective, first_wins=True)
        row = tuple(sol.assignment.get(it.id, 0) - 1 for it in items)
        return _verdict({"optimum": best is not None and best[0] == row and best[1] == sol.objective_value})
    best = oracles.choose(_candidates(model, items, objective, payload, k), objective)
    got = tuple(sorted(payload.instance.position(i) for i in sol.assignment))
    return _verdict({"optimum": best is not None and best[0] == got and best[1] == sol.objective_value})


def _front_oracle(model, items, objective, payload, k, front) -> dict:
    pts = oracles.front_points(_candidates(model, items, objective, payload, k), objective)
    return _verdict({"front": {s.key() for s in front} == pts})


def cmd_color(args) -> Report:
    f = _load(args, "graph")
    g = f.payload
    idx = {v: i for i, v in enumerate(g.vertices)}
    edges = [tuple(idx[v] for v in e) for e in g.edges]
    n = len(g.vertices)
    if args.algo == "chromatic":
        chi, coloring = col.chromatic_coloring(g)
        rep = Report("color/chromatic", digest(f), coloring, chi)
        if args.oracle:
            rep.oracle = _verdict({"chromatic": oracles.brute_chromatic(n, edges) == chi,
                                   "proper": col.is_proper(g, coloring)})
    elif args.algo == "count":
        k = args.k or col.chromatic_coloring(g)[0]
        count = col.count_proper_colorings(g, k)
        rep = Report("color/count", digest(f), objective=count, metrics={"colors": k})
        if args.oracle:
            rep.oracle = _verdict({"count": oracles.brute_count_colorings(n, edges, k) == count})
    elif args.algo == "weighted":
        res = col.min_weight_coloring(g)
        res = res if isinstance(res, list) else [res]
        rep = Report("color/weighted", digest(f),
                     metrics={"front": [{"coloring": r.coloring, "colors": list(r.used), "weight": r.weight}
                                        for r in res]})
    else:
        front = col.compat_coloring_pareto(g, args.min_compat)
        rep = Report("color/compat", digest(f),
                     metrics={"front": [{"configuration": c, "N": str(q)} for c, q in front]})
        if args.oracle:
            want = [(c, q) for c, q in oracles.brute_compat_front(g) if q[0] >= args.min_compat]
            got = [(c, (q.w, q.e.counts if isinstance(q.e, mc.MsEstimate) else tuple(q.e))) for c, q in front]
            rep.oracle = _verdict({"front": sorted(map(repr, got)) == sorted(map(repr, want))})
    return rep


def cmd_partition_color(args) -> Report:
    f = _load(args, "graph")
    g = f.payload
    if g.parts is None:
        raise UsageError("partition-color needs 'parts' in the graph instance")
    reps, coloring, chi = col.partition_coloring(g)
    rep = Report("partition-color", digest(f), {"representatives": list(reps), "coloring": coloring}, chi)
    if args.oracle:
        best = min(col.chromatic_coloring(g.induced(choice))[0] for choice in itertools.product(*g.parts))
        rep.oracle = _verdict({"colors": best == chi, "proper": col.is_proper(g.induced(reps), coloring)})
    return rep


def _labelled_placement(items) -> dict:
    out = {}
    for it in items:
        if it.general_item is None or it.machine is None or it.period is None:
            raise UsageError("--placement labels needs general_item, machine and period on every item")
        out[it.general_item] = (it.machine, it.period)
    return out


def cmd_pipeline(args) -> Report:
    if args.which == "paper":
        f = _load(args, "production")
        p = f.payload
        placement = _labelled_placement(p.items) if args.placement == "labels" else None
        plan = pl.plan_paper(p.items, p.W, p.T, p.M, p.table, placement)
        gis = [{"label": g.label, "color": g.color, "members": list(g.members), "width": g.width,
                "duration": g.duration} for g in plan.general_items]
        sched = {str(m): [{"period": per, "order": labels} for per, labels in rows]
                 for m, rows in plan.schedules.items()}
        rep = Report("pipeline/paper", digest(f), {"general_items": gis, "schedules": sched},
                     plan.color_change_cost,
                     {"color_change_cost": plan.color_change_cost, "unused_area": plan.unused_area,
                      "idle_time": plan.idle_time})
        if args.oracle:
            checks = {}
            for m, rows in plan.schedules.items():
                last = None
                for per, labels in rows:
                    gs = [plan.general_item(x) for x in labels]
                    got = pl.sequence_cost([g.color for g in gs], p.table, last)
                    best = min(pl.sequence_cost([g.color for g in perm], p.table, last)
                               for perm in itertools.permutations(gs))
                    checks[f"machine {m} period {per}"] = got == best
                    last = gs[-1].color
            rep.oracle = _verdict(checks)
        return rep
    f = _load(args, "messages")
    p = f.payload
    history = pl.simulate_periods(list(p.items), p.T, args.periods, args.objective)
    periods = []
    for t, sel in enumerate(history, 1):
        sch = sel.schedule
        periods.append({"period": t, "selected": [m.id for m in sel.selected],
                        "completion": list(sch.completion), "wait": {str(m.id): m.wait_age for m in sel.wait},
                        "mean_completion": pl.mean_completion(sch) if sel.selected else None})
    rep = Report(f"pipeline/messages/{args.objective}", digest(f), periods,
                 metrics={"front": [list(x) for x in history[0].front]} if history and history[0].front else {})
    if args.oracle and history and history[0].selected:
        sel = history[0].selected
        best = min(sum(itertools.accumulate(m.weight for m in perm), Fraction(0))
                   for perm in itertools.permutations(sel)) / len(sel)
        rep.oracle = _verdict({"swf_mean": pl.mean_completion(history[0].schedule) == best})
    return rep


def cmd_oracle(args) -> Report:
    seeds = range(args.seed, args.seed + args.count)
    eq = oracles.equivalence_suite(seeds)
    heur = oracles.heuristic_suite(seeds)
    failing = {k: v for k, v in {**eq, **heur}.items() if v}
    return Report("oracle", solution={"seeds": [args.seed, args.seed + args.count - 1]},
                  metrics={"solvers": sorted(eq), "heuristics": sorted(heur)},
                  oracle={"agree": not failing, "failing_seeds": failing})


def cmd_bench(args) -> Report:
    from .bench import run_benchmarks
    rows = run_benchmarks(seed=args.seed, repeat=args.repeat)
    return Report("bench", metrics={"kernels": rows}, wall_time=sum(r["compiled_s"] + r["python_s"] for r in rows))


COMMANDS = {"scale": cmd_scale, "median": cmd_median, "proximity": cmd_proximity, "pack": cmd_pack,
            "solve": cmd_solve, "color": cmd_color, "partition-color": cmd_partition_color,
            "pipeline": cmd_pipeline, "oracle": cmd_oracle, "bench": cmd_bench}


def run_command(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        t0 = time.perf_counter()
        rep = COMMANDS[args.command](args)
        if rep.wall_time is None:
            rep.wall_time = time.perf_counter() - t0
        text = emit_report(rep, args.format, timing=args.timing or args.command == "bench")
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            stdout.write(text)
        if rep.oracle is not None and not rep.oracle.get("agree", True):
            return EXIT_INFEASIBLE
        return EXIT_OK
    except (UsageError, SchemaError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    except SizeLimitError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_LIMIT
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=stderr)
        return EXIT_INFEASIBLE
    except (MultibinError, ValueError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
