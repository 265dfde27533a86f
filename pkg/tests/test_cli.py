from __future__ import annotations

import json
import math
from fractions import Fraction

import mpmath
import pytest

from backend.cli import scenarios
from backend.cli.commands import main
from backend.cli.config import UsageError, parse_config
from backend.cli.output import plain, render_csv, render_json
from clifford_rep.modules import ModuleSpec, build_module
from common.errors import ScenarioFactError
from heat_trace.totals import TraceControls
from isospectral.classification import Relation


def _write_json(path, payload):
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


# --- parsing --------------------------------------------------------------------------


def test_parse_trace_flags():
    cfg = parse_config(["trace", "--sig", "1,0", "--t", "0.1,0.5", "--tol", "1e-10"])
    assert cfg.command == "trace"
    assert cfg.source == ModuleSpec.minimal((1, 0))
    assert cfg.t_values == (0.1, 0.5)
    assert cfg.controls.tail_tolerance == 1e-10
    assert cfg.fmt == "csv"


def test_parse_family():
    cfg = parse_config(["family", "--sig", "3,1", "--m", "2", "--out", "fam.json"])
    assert (cfg.signature.r, cfg.signature.s) == (3, 1)
    assert cfg.m == 2
    assert cfg.output == "fam.json"
    assert cfg.fmt == "json"


def test_command_defaults_apply():
    cfg = parse_config(["compare", "--sig", "1,3", "--sig-b", "3,1"])
    assert cfg.t_values == (0.1, 0.25, 0.5, 1.0, 2.0)
    assert cfg.source_b == ModuleSpec.minimal((3, 1))


def test_config_file_sits_between_flags_and_defaults(tmp_path):
    path = _write_json(tmp_path / "run.json", {"t": [0.2, 0.4], "tol": 1e-9, "sig": "1,0"})
    from_file = parse_config(["trace"], config_file=path)
    assert from_file.t_values == (0.2, 0.4)
    assert from_file.controls.tail_tolerance == 1e-9
    overridden = parse_config(["trace", "--config", path, "--t", "0.3"])
    assert overridden.t_values == (0.3,)
    assert overridden.controls.tail_tolerance == 1e-9


def test_config_file_rejects_unknown_keys(tmp_path):
    path = _write_json(tmp_path / "run.json", {"cutoff": 10})
    with pytest.raises(UsageError):
        parse_config(["trace", "--sig", "1,0", "--config", path])


def test_module_file_source(tmp_path):
    spec = ModuleSpec.from_counts((3, 1), p_plus=1, p_minus=1)
    spec_path = _write_json(tmp_path / "spec.json", spec.to_dict())
    assert parse_config(["dump-algebra", "--alg", spec_path]).source == spec
    dump_path = _write_json(tmp_path / "module.json", build_module(spec).to_dict())
    assert parse_config(["dump-algebra", "--alg", dump_path, "--sig", "3,1"]).source == build_module(spec)


@pytest.mark.parametrize(
    "argv",
    [
        ["trace"],
        ["trace", "--sig", "1"],
        ["trace", "--sig", "0,0"],
        ["trace", "--sig", "1,0", "--module", "p+"],
        ["trace", "--module", "p:2"],
        ["trace", "--sig", "1,0", "--t", ""],
        ["trace", "--sig", "1,0", "--radius", "0"],
        ["compare", "--sig", "1,3"],
        ["family", "--m", "2"],
        ["classify"],
        ["dump-module", "--sig", "1,0", "--format", "csv"],
        ["trace", "--sig", "1,0", "--bogus"],
        ["trace", "--alg", "/nonexistent/module.json"],
    ],
)
def test_usage_errors(argv):
    with pytest.raises(UsageError):
        parse_config(argv)


def test_conflicting_signature_and_module_file(tmp_path):
    path = _write_json(tmp_path / "spec.json", ModuleSpec.minimal((1, 3)).to_dict())
    with pytest.raises(UsageError):
        parse_config(["trace", "--alg", path, "--sig", "3,1"])
    with pytest.raises(UsageError):
        parse_config(["trace", "--alg", path, "--module", "minimal"])
    assert main(["trace", "--alg", path, "--sig", "3,1"]) == 2


def test_unknown_flag_exit_status(capsys):
    assert main(["trace", "--sig", "1,0", "--bogus"]) == 2
    assert "usage error" in capsys.readouterr().err


# --- output ---------------------------------------------------------------------------


def test_plain_values():
    assert plain(mpmath.mpf(1) / 3) == pytest.approx(1 / 3)
    assert isinstance(plain(mpmath.mpf(2)), float)
    assert plain(Fraction(1, 2)) == "1/2"
    assert plain(math.inf) == "inf"
    assert plain(Relation.NON_ISOMORPHIC) == "NonIsomorphic"
    assert plain({1: (True, None)}) == {"1": [True, None]}
    with pytest.raises(TypeError):
        plain(object())


def test_render_json_sorts_keys():
    text = render_json({"b": 1, "a": 0.1})
    assert text.index('"a"') < text.index('"b"')
    assert text.endswith("\n")


def test_render_csv_uses_repr_floats():
    text = render_csv(("t", "value", "tail_bound"), [(0.1, mpmath.mpf(2) / 3, None)])
    assert text == "t,value,tail_bound\n0.1,0.6666666666666666,\n"


# --- commands -------------------------------------------------------------------------


def test_trace_csv_is_deterministic(tmp_path):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["trace", "--sig", "1,0", "--t", "0.5,0.1,0.25"]
    assert main(argv + ["--out", str(first)]) == 0
    assert main(argv + ["--out", str(second)]) == 0
    text = first.read_text(encoding="utf-8")
    assert text == second.read_text(encoding="utf-8")
    lines = text.splitlines()
    assert lines[0] == "t,value,tail_bound"
    assert [float(line.split(",")[0]) for line in lines[1:]] == [0.1, 0.25, 0.5]


def test_trace_json_to_stdout(capsys):
    assert main(["trace", "--sig", "1,0", "--module", "p:2", "--t", "0.3", "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["laplacian"] is False
    assert payload["rows"][0]["t"] == 0.3
    assert payload["rows"][0]["tail_bound"] <= 1e-12


def test_classify_signature(capsys):
    assert main(["classify", "--sig", "3,1"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["relation"] == "NonIsomorphic"
    assert payload["dimensions"] == [12, 12]
    assert payload["source"] == "table"


def test_classify_enumeration(capsys):
    assert main(["classify", "--max-dim", "13"]) == 0
    pairs = json.loads(capsys.readouterr().out)["pairs"]
    assert pairs == [
        {"r": 3, "s": 1, "manifold_dimension": 12},
        {"r": 3, "s": 2, "manifold_dimension": 13},
    ]


def test_dump_module_reports_verification(capsys):
    assert main(["dump-module", "--sig", "1,3"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["dim"] == 8
    assert payload["verification"]["passed"] is True


def test_family_command(tmp_path):
    out = tmp_path / "families" / "fam.json"
    assert main(["family", "--sig", "3,0", "--m", "1", "--out", str(out)]) == 0
    payload = json.loads(out.read_text(encoding="utf-8"))
    assert payload["manifold_dimension"] == 11
    assert payload["certified"] is True


def test_spectrum_needs_definite_center(capsys):
    assert main(["spectrum", "--sig", "1,1"]) == 1
    assert "SignatureError" in capsys.readouterr().err


def test_spectrum_reports_module_dimension(capsys):
    assert main(["spectrum", "--sig", "1,0", "--module", "p:2", "--cutoff", "30", "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["module_dimension"] == 4


def test_asymptotics_command(capsys):
    assert main(["asymptotics", "--sig", "1,0", "--injectivity", "4"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["cM"] == pytest.approx(1 / 8, abs=1e-8)
    assert payload["zeta"]["value"] == pytest.approx(1 / 8, rel=1e-12)
    assert "match" not in payload
    assert len(payload["injectivity"]["values"]) == 3


@pytest.mark.parametrize("flag", ["paper", "unit"])
def test_asymptotics_unit_volume_alias(capsys, flag):
    assert main(["asymptotics", "--sig", "1,0", "--convention", flag]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["convention"] == "unit"
    assert payload["cM"] == pytest.approx(1 / 8, abs=1e-8)
    assert parse_config(["asymptotics", "--sig", "1,0", "--convention", flag]).convention == "unit"


def test_asymptotics_lebesgue_volume(capsys):
    assert main(["asymptotics", "--sig", "1,0", "--convention", "lebesgue"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["convention"] == "lebesgue"
    assert payload["cM"] == pytest.approx(1 / 16, abs=1e-8)


def test_reproduce_family_scenario(capsys):
    assert main(["reproduce", "family-11d", "--t", "0.5,1.0"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["all_facts_hold"] is True
    assert payload["family"]["manifold_dimension"] == 11
    assert [entry["pair"] for entry in payload["numeric"]] == [[0, 1]]


def test_reproduce_exits_nonzero_when_a_fact_fails(monkeypatch, capsys):
    monkeypatch.setitem(
        scenarios.SCENARIOS, "family-11d", lambda ctrl, t_values: {"facts": {"dimension": True, "traces_agree": False}}
    )
    assert main(["reproduce", "family-11d"]) == 1
    err = capsys.readouterr().err
    assert "ScenarioFactError" in err and "traces_agree" in err
    with pytest.raises(ScenarioFactError) as info:
        scenarios.run_scenario("family-11d", TraceControls())
    assert info.value.failed == ("traces_agree",)


def test_family_command_compares_every_pair(tmp_path):
    out = tmp_path / "fam.json"
    assert main(["family", "--sig", "3,0", "--m", "2", "--t", "0.5,1.0", "--out", str(out)]) == 0
    payload = json.loads(out.read_text(encoding="utf-8"))
    assert [entry["pair"] for entry in payload["numeric"]] == [[0, 1], [0, 2], [1, 2]]
    assert all(entry["verdict"] != "Distinguished" for entry in payload["numeric"])


@pytest.mark.slow
@pytest.mark.parametrize("scenario", ["pair-12d", "heisenberg-match"])
def test_reproduce_twelve_dimensional_scenarios(capsys, scenario):
    assert main(["reproduce", scenario]) == 0
    assert json.loads(capsys.readouterr().out)["all_facts_hold"] is True
