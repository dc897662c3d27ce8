import csv
import json
from pathlib import Path

import pytest

from zpflab.cli import main
from zpflab.config import CONFIG_SCHEMA, config_from_dict, parse_oscillator
from zpflab.errors import ConfigError
from zpflab.report import CheckRecord, RunReport, emit_trace
from zpflab.runner import run_scenario

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def _write(tmp_path, obj, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return p


def _report(out):
    return json.loads((Path(out) / "report.json").read_text())


def test_trk_run(tmp_path, capsys):
    assert main(["run", str(CONFIGS / "trk_oscillator.json"), "--out", str(tmp_path)]) == 0
    rep = _report(tmp_path)
    assert rep["pass"] and rep["schema_version"] == 1
    names = {r["name"]: r for r in rep["records"]}
    assert names["trk.level9"]["expected"] == "truncation boundary"
    rows = list(csv.reader((tmp_path / "trace.csv").open()))
    assert rows[0] == ["level", "sum", "deviation"] and len(rows) == 11
    assert "trk: PASS" in capsys.readouterr().out


def test_pauli_certificate_in_report(tmp_path):
    assert main(["run", str(CONFIGS / "pauli_three.json"), "--out", str(tmp_path), "--quiet"]) == 0
    rep = _report(tmp_path)
    cert = rep["artifacts"]["pauli"]["certificate"]
    assert rep["artifacts"]["pauli"]["feasible"] is False and cert["pair_extensions"]


def test_covariance_run_and_trace(tmp_path):
    code = main(["run", str(CONFIGS / "covariance_two_level.json"), "--out", str(tmp_path),
                 "--quiet", "--samples", "40000"])
    assert code == 0
    rep = _report(tmp_path)
    mc = rep["artifacts"]["covariance"]
    assert mc["analytic"] == -1.0 and abs(mc["estimate"] + 1) < 4 * mc["standard_error"]
    header = (tmp_path / "trace.csv").read_text().splitlines()[0]
    assert header == "samples,estimate,stderr,analytic"


def test_reports_deterministic_modulo_timestamp(tmp_path):
    outs = []
    for i in range(2):
        out = tmp_path / str(i)
        main(["run", str(CONFIGS / "covariance_two_level.json"), "--out", str(out), "--quiet",
              "--samples", "20000", "--seed", "0x2a"])
        rep = _report(out)
        del rep["metadata"]["timestamp"]
        outs.append(rep)
        assert rep["metadata"]["seed"] == 42
    assert outs[0] == outs[1]


@pytest.mark.parametrize("name", ["commutator_oscillator", "bracket2_fermion", "entangle_symmetric",
                                  "spin_half"])
def test_sample_configs_pass(name, tmp_path):
    assert main(["run", str(CONFIGS / f"{name}.json"), "--out", str(tmp_path), "--quiet"]) == 0


def test_failed_check_exits_one(tmp_path):
    cfg = {"schema_version": 1, "experiment": "pauli", "params": {"upsilon": "3/2", "k": 3}}
    rep = run_scenario(config_from_dict(cfg))
    assert rep.passed
    bad = {"schema_version": 1, "experiment": "trk", "system": "oscillator(4)",
           "matrices": {"x": [[0, 2, 0, 0], [2, 0, 1, 0], [0, 1, 0, 1], [0, 0, 1, 0]]}}
    assert main(["run", str(_write(tmp_path, bad)), "--quiet"]) == 1


@pytest.mark.parametrize("cfg", [
    {"experiment": "trk"},
    {"schema_version": 2, "experiment": "trk"},
    {"schema_version": 1, "experiment": "nope"},
    {"schema_version": 1, "experiment": "pauli", "params": {"k": 0}},
    {"schema_version": 1, "experiment": "pauli", "extra": 1},
    {"schema_version": 1, "experiment": "trk", "system": "oscillator(10)"},
    {"schema_version": 1, "experiment": "trk", "system": "oscillator(1)", "matrices": {"x": "x"}},
    {"schema_version": 1, "experiment": "covariance", "matrices": {"f": {"path": "missing.json"}}},
    {"schema_version": 1, "experiment": "covariance", "matrices": {"f": [[0, 1], [2, 0]]}},
])
def test_config_errors_exit_two(cfg, tmp_path, capsys):
    assert main(["run", str(_write(tmp_path, cfg)), "--quiet"]) == 2
    assert "config error" in capsys.readouterr().err


def test_usage_errors_exit_two(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["run"])
    assert exc.value.code == 2
    assert main(["run", str(tmp_path / "absent.json")]) == 2
    p = tmp_path / "broken.json"
    p.write_text("{not json")
    assert main(["run", str(p)]) == 2


def test_matrix_from_file(tmp_path):
    (tmp_path / "f.json").write_text(json.dumps({"dim": 2, "entries": [[0, 0], [1, 0], [1, 0], [0, 0]]}))
    cfg = {"schema_version": 1, "experiment": "entangle", "matrices": {"f": {"path": "f.json"}},
           "params": {"zeta": 1}}
    assert main(["run", str(_write(tmp_path, cfg)), "--quiet"]) == 0


def test_schema_command(capsys):
    assert main(["schema"]) == 0
    assert json.loads(capsys.readouterr().out) == CONFIG_SCHEMA


def test_parse_oscillator():
    assert parse_oscillator("oscillator(10,1,1,1)") == (10, 1.0, 1.0, 1.0)
    assert parse_oscillator(" oscillator( 4 , 2 ) ") == (4, 2.0, 1.0, 1.0)
    with pytest.raises(ConfigError):
        parse_oscillator("oscillator(a)")


def test_emit_trace_header_only(tmp_path):
    rep = RunReport("covariance", trace_columns=("samples", "estimate", "stderr", "analytic"))
    path = emit_trace(rep, tmp_path / "t.csv")
    assert path.read_bytes() == b"samples,estimate,stderr,analytic\r\n"
    with pytest.raises(OSError):
        emit_trace(rep, tmp_path / "no" / "such" / "dir.csv")


def test_overall_pass_is_conjunction():
    rep = RunReport("x")
    rep.add(CheckRecord("a", 1, 1, None, True))
    assert rep.passed
    rep.add(CheckRecord("b", 1, 2, None, False))
    assert not rep.passed
    assert "FAIL" in rep.table()


def test_numerical_failure_becomes_record():
    rep = RunReport("x")
    rep.guarded("boom", lambda: 1 / 0)
    assert not rep.passed and rep.records[0].note == "numerical failure"


def test_suite_command_with_reduced_battery(monkeypatch, tmp_path, capsys):
    from zpflab import suite

    monkeypatch.setattr(suite, "CRITERIA", (suite.criterion_trk, suite.criterion_pauli))
    assert main(["suite", "--out", str(tmp_path)]) == 0
    rep = _report(tmp_path)
    assert rep["experiment"] == "full-suite" and len(rep["records"]) == 2
    assert "full-suite: PASS (2/2 criteria)" in capsys.readouterr().out
    assert main(["run", str(CONFIGS / "full_suite.json"), "--quiet"]) == 0

    failing = suite.CriterionResult(0, "forced", False, 0.0, None, "forced failure")
    monkeypatch.setattr(suite, "CRITERIA", (lambda: failing,))
    assert main(["suite", "--quiet"]) == 1
