import json
import subprocess
import sys

import pytest

from crtwistor import cli, pipelines
from crtwistor.models import crdata_to_json, random_perturbation


def run_json(args, tmp_path, name="out.json"):
    out = tmp_path / name
    code = cli.run(args + ["--output", str(out)])
    return code, json.loads(out.read_text()) if out.exists() else None


def test_unknown_subcommand(capsys):
    assert cli.run(["bogus"]) == 2
    assert "invalid choice" in capsys.readouterr().err


def test_missing_subcommand():
    assert cli.run([]) == 2


def test_help_exits_zero(capsys):
    assert cli.run(["--help"]) == 0
    assert "verify-bergmann" in capsys.readouterr().out


def test_expand_order_zero(tmp_path):
    code, doc = run_json(["expand", "--order", "0"], tmp_path)
    assert code == 0
    (rep,) = doc["reports"]
    assert len(rep["data"]["orders"]) == 1
    assert rep["data"]["orders"][0]["unique"]
    assert doc["config"]["seed"] == 0


def test_expand_order_out_of_bounds(capsys):
    assert cli.run(["expand", "--order", "7"]) == 2
    assert "--order" in capsys.readouterr().err


def test_expand_with_input(tmp_path):
    import random

    cfg = tmp_path / "cr.json"
    cfg.write_text(json.dumps(crdata_to_json(random_perturbation(random.Random(3)))))
    code, doc = run_json(["expand", "--input", str(cfg), "--order", "1"], tmp_path)
    assert code == 0
    assert doc["reports"][0]["checks"]["order_1_unique"]


@pytest.mark.parametrize("text", ["{not json", '{"bogus": 1}', '{"theta1": {"du": [[[0, 0], "1"]]}}'])
def test_malformed_input(tmp_path, text, capsys):
    cfg = tmp_path / "cr.json"
    cfg.write_text(text)
    assert cli.run(["expand", "--input", str(cfg)]) == 2
    assert "error" in capsys.readouterr().err


def test_missing_input_file(tmp_path):
    assert cli.run(["expand", "--input", str(tmp_path / "nope.json")]) == 2


def test_bad_env_degree(monkeypatch):
    monkeypatch.setenv("CRTWISTOR_MAX_DEGREE", "zero")
    assert cli.run(["nodal-check"]) == 2


def test_verify_bergmann(tmp_path):
    code, doc = run_json(["verify-bergmann"], tmp_path)
    assert code == 0
    checks = doc["reports"][0]["checks"]
    assert checks["w_minus_zero"] and checks["einstein"]


def test_failed_invariant_exits_one(monkeypatch, capsys):
    def broken():
        rep = pipelines.Report("nodal-check")
        rep.check("global_dimension_4", False)
        return rep

    monkeypatch.setattr(pipelines, "nodal_check", broken)
    assert cli.run(["nodal-check"]) == 1
    assert "nodal-check:global_dimension_4" in capsys.readouterr().err


def test_domain_error_exits_one(monkeypatch, capsys):
    from crtwistor.errors import DomainError

    def boom():
        raise DomainError("branches disagree")

    monkeypatch.setattr(pipelines, "nodal_check", boom)
    assert cli.run(["nodal-check"]) == 1
    assert "branches disagree" in capsys.readouterr().err


def test_reports_are_deterministic(tmp_path):
    args = ["twistor-check", "--samples", "60", "--seed", "7"]
    _, a = run_json(args, tmp_path, "a.json")
    _, b = run_json(args, tmp_path, "b.json")
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    assert a["config"]["seed"] == 7
    _, c = run_json(["twistor-check", "--samples", "60", "--seed", "8"], tmp_path, "c.json")
    assert c["reports"][0]["data"]["curves"] != a["reports"][0]["data"]["curves"]


def test_inverse_transform_report(tmp_path):
    code, doc = run_json(["inverse-transform"], tmp_path)
    assert code == 0
    data = doc["reports"][0]["data"]
    assert data["dtheta"] == {"+": "-1", "-": "-1"}
    assert data["contact_table"]["s1^s2"] == ["0", "-i", "0"]


def test_report_alias_and_stdout(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert cli.run(["nodal-check", "--report", str(out)]) == 0
    assert json.loads(out.read_text())["passed"]
    assert cli.run(["nodal-check"]) == 0
    assert json.loads(capsys.readouterr().out)["passed"]


def test_console_entry_point(tmp_path):
    p = subprocess.run([sys.executable, "-m", "crtwistor", "nodal-check"], capture_output=True, text=True)
    assert p.returncode == 0
    assert json.loads(p.stdout)["reports"][0]["name"] == "nodal-check"
    p = subprocess.run([sys.executable, "-m", "crtwistor", "nope"], capture_output=True, text=True)
    assert p.returncode == 2
