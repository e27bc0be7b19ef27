import io
import json
from fractions import Fraction

import pytest

from multibin.cli import run_command
from multibin.errors import SchemaError
from multibin.instance_io import (Report, emit_instance, emit_report, fixture_names, load_fixture, parse_instance,
                                  parse_report)
from multibin.mse_core import MsEstimate

KNAP = {
    "kind": "pack", "capacity": 1, "capacities": [1, "1/2"],
    "items": [
        {"id": 1, "weight": 0.4, "profit": 3, "estimate": "3,2:[2,0,0]",
         "position_profits": {"1": 3, "2": 1}, "position_estimates": {"1": "3,2:[2,0,0]", "2": "3,2:[0,2,0]"}},
        {"id": 2, "weight": 0.5, "profit": 2, "estimate": "3,2:[1,1,0]",
         "position_profits": {"1": 2, "2": 2}, "position_estimates": {"1": "3,2:[1,1,0]", "2": "3,2:[1,1,0]"}},
        {"id": 3, "weight": 0.3, "profit": 4, "estimate": "3,2:[0,1,1]",
         "position_profits": {"1": 4}, "position_estimates": {"1": "3,2:[0,1,1]"}},
    ],
    "conflicts": [[1, 3]],
}


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_command(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def knap(tmp_path):
    p = tmp_path / "k.json"
    p.write_text(json.dumps(KNAP))
    return str(p)


@pytest.mark.parametrize("name", fixture_names())
def test_fixtures_round_trip(name):
    f = load_fixture(name)
    again = parse_instance(emit_instance(f))
    assert again == f
    assert emit_instance(again) == emit_instance(f)


def test_fixture_payloads():
    assert load_fixture("fig8").payload.l == 3
    assert len(load_fixture("table13").payload.items) == 25


def test_weight_zero_rejected():
    with pytest.raises(SchemaError) as exc:
        parse_instance('{"kind": "pack", "capacity": 1,\n "items": [{"id": 1, "weight": 0}]}')
    assert "weight must be positive" in str(exc.value)
    assert "line 2" in str(exc.value)


def test_syntax_error_has_position():
    with pytest.raises(SchemaError) as exc:
        parse_instance('{"kind": "pack",\n  "capacity": }')
    assert "line 2, column" in str(exc.value)


def test_dangling_ids_and_scale_mismatch():
    bad = dict(KNAP, conflicts=[[1, 9]])
    with pytest.raises(SchemaError) as exc:
        parse_instance(json.dumps(bad))
    assert "unknown item id 9" in str(exc.value)
    with pytest.raises(SchemaError) as exc:
        parse_instance(json.dumps({"kind": "estimates", "estimates": ["3,2:[2,0,0]", "2,2:[1,1]"]}))
    assert "mix scales" in str(exc.value)
    with pytest.raises(SchemaError):
        parse_instance('{"kind": "tiles"}')


def test_several_problems_reported_together():
    text = json.dumps({"kind": "pack", "capacity": 1, "items": [{"id": 1, "weight": 0}, {"id": 2, "weight": -1}]})
    with pytest.raises(SchemaError) as exc:
        parse_instance(text)
    assert str(exc.value).count("weight must be positive") == 2


def test_scale_command():
    code, out, _ = run("scale", "--l", "3", "--eta", "3", "--format", "machine")
    assert code == 0
    rep = parse_report(out)
    assert len(rep["solution"]) == 8 and rep["metrics"]["estimates"] == 8


def test_pipeline_command():
    code, out, _ = run("pipeline", "paper", "--fixture", "table13", "--format", "machine")
    assert code == 0
    labels = [g["label"] for g in parse_report(out)["solution"]["general_items"]]
    assert labels == ["I", "II", "III", "IV", "V", "VI", "VII", "VIII"]


def test_exit_codes(tmp_path, knap):
    assert run("solve", "knapsack-mse", "--in", str(tmp_path / "missing.json"))[0] == 2
    assert run("pack", "--bogus")[0] == 2
    assert run("frobnicate")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "pack"')
    assert run("pack", "--in", str(bad))[0] == 2
    big = tmp_path / "big.json"
    big.write_text(json.dumps({"kind": "pack", "capacity": 1, "items": [{"id": i, "weight": 0.01} for i in range(21)]}))
    assert run("pack", "--in", str(big), "--algo", "exact")[0] == 3
    nofit = tmp_path / "nofit.json"
    nofit.write_text(json.dumps(dict(KNAP, items=KNAP["items"] + [
        {"id": 4, "weight": 0.6, "profit": 1, "position_profits": {"2": 5},
         "position_estimates": {"2": "3,2:[1,0,1]"}}])))
    assert run("solve", "gap-mse", "--in", str(nofit), "--objective", "scalar")[0] == 1
    assert run("solve", "knapsack-mse", "--in", knap)[0] == 0


@pytest.mark.parametrize("argv", [
    ("solve", "knapsack-mse", "--objective", "integrated"),
    ("solve", "multiple-knapsack-mse", "--objective", "median"),
    ("solve", "gap-mse", "--objective", "scalar"),
    ("solve", "conflict-inverse-mse", "--k", "2"),
    ("solve", "pareto", "--algo", "knapsack"),
    ("pack", "--algo", "conflict-exact"),
])
def test_oracle_agrees_and_output_is_deterministic(knap, argv):
    a = run(*argv, "--in", knap, "--oracle", "--format", "machine")
    b = run(*argv, "--in", knap, "--oracle", "--format", "machine")
    assert a[0] == 0 and a == b
    rep = parse_report(a[1])
    assert rep["oracle"]["agree"] is True
    assert "wall_time" not in rep


def test_oracle_command():
    code, out, _ = run("oracle", "--seed", "1", "--count", "3", "--format", "machine")
    assert code == 0 and parse_report(out)["oracle"]["agree"] is True


def test_out_flag(tmp_path):
    dest = tmp_path / "r.json"
    assert run("scale", "--l", "2", "--eta", "2", "--format", "machine", "--out", str(dest))[0] == 0
    assert len(parse_report(dest.read_text())["solution"]) == 3


def test_empty_front_human():
    text = emit_report(Report("pareto", metrics={"front": []}))
    assert "front: []" in text


def test_machine_report_reparses():
    rep = Report("x", "abc", solution={"bins": [[1, 2]]}, objective=MsEstimate.of(1, 1, 0),
                 metrics={"ratio": Fraction(1, 3)}, wall_time=0.5)
    d = parse_report(emit_report(rep, "machine"))
    assert d == json.loads(json.dumps(rep.to_dict()))
    assert "wall_time" not in d and "wall_time" in parse_report(emit_report(rep, "machine", timing=True))
    assert emit_report(rep, "human") == emit_report(rep, "human")


def test_compat_report_lists_quality_vectors():
    code, out, _ = run("color", "--fixture", "fig13", "--algo", "compat")
    assert code == 0 and "(4;1,3,0)" in out
