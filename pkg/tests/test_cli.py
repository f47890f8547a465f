import json
import os
import subprocess
import sys

import pytest

from ddetest.cli import main
from ddetest.report import parse_json

FIXTURE = "faithful-hardle"


def run_cli(args):
    """Invoke main() in-process, capturing exit code."""
    return main(args)


def test_usage_error_exit_code_2():
    # argparse rejects out-of-range alpha at parse time
    with pytest.raises(SystemExit) as exc:
        run_cli(["test", "--family", "normal", "--data", FIXTURE, "--alpha", "1.5"])
    assert exc.value.code == 2


def test_unknown_family_exit_code_2():
    with pytest.raises(SystemExit) as exc:
        run_cli(["test", "--family", "zeta", "--data", FIXTURE])
    assert exc.value.code == 2


def test_data_error_exit_code_3(capsys):
    code = run_cli(["test", "--family", "normal", "--data", "/nonexistent.csv",
                    "--nboot", "10", "--seed", "1"])
    assert code == 3
    assert "error" in capsys.readouterr().err


def test_support_violation_exit_code_3(tmp_path, capsys):
    p = tmp_path / "neg.csv"
    p.write_text("x\n1.0\n-2.0\n3.0\n4.0\n5.0\n")
    code = run_cli(["entropy", "--data", str(p), "--column", "x",
                    "--kde", "--null-family", "gamma"])
    assert code == 3


def test_numeric_family_test_runs_and_writes_report(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = run_cli(["test", "--family", "normal", "--data", FIXTURE,
                    "--nboot", "40", "--seed", "11", "--threads", "1",
                    "--out", str(out)])
    assert code == 0
    text = capsys.readouterr().out
    assert "p-value" in text and "decision" in text
    doc = parse_json(out.read_text())
    assert doc["schema_version"] == 1
    assert doc["dataset"]["n"] == 272
    assert doc["config"]["nboot"] == 40
    assert len(doc["result"]["bootstrap"]["values"]) == 40


def test_report_round_trips_byte_identically(tmp_path):
    out = tmp_path / "r.json"
    run_cli(["test", "--family", "exponential", "--data", FIXTURE,
             "--nboot", "25", "--seed", "2", "--threads", "1", "--out", str(out)])
    raw = out.read_text()
    doc = parse_json(raw)
    from ddetest.report import emit_json

    assert emit_json(doc) == raw


def test_same_seed_reruns_are_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path, threads in ((a, "1"), (b, "4")):
        run_cli(["test", "--family", "gamma", "--data", FIXTURE,
                 "--nboot", "30", "--seed", "7", "--threads", threads,
                 "--out", str(path)])
    assert a.read_bytes() == b.read_bytes()


def test_simulate_writes_cells_and_manifest(tmp_path, capsys):
    out = tmp_path / "sim"
    code = run_cli(["simulate", "--null", "normal", "--alt", "laplace(0,0.7071)",
                    "--n", "50", "--reps", "2", "--nboot", "20", "--seed", "5",
                    "--threads", "1", "--out", str(out)])
    assert code == 0
    csv_text = (out / "cells.csv").read_text()
    lines = csv_text.strip().splitlines()
    assert lines[0].startswith("null,dgp,n,")
    assert len(lines) == 2
    raw = (out / "manifest.json").read_text()
    manifest = parse_json(raw)
    assert manifest["config"]["reps"] == 2
    assert manifest["schema_version"] == 1
    from ddetest.report import emit_json

    assert emit_json(manifest) == raw  # manifest round-trips too


def test_simulate_table4_cell_count(tmp_path):
    out = tmp_path / "sim4"
    run_cli(["simulate", "--null", "normal", "--alt", "table4", "--n", "50,100",
             "--reps", "1", "--nboot", "19", "--seed", "5", "--threads", "1",
             "--out", str(out)])
    lines = (out / "cells.csv").read_text().strip().splitlines()
    # header + (size row + 4 alternatives) x 2 sizes
    assert len(lines) == 1 + 10


def test_simulate_deterministic_across_threads(tmp_path):
    outs = []
    for tag, threads in (("s1", "1"), ("s4", "4")):
        out = tmp_path / tag
        run_cli(["simulate", "--null", "exponential", "--alt", "table4",
                 "--n", "50", "--reps", "2", "--nboot", "15", "--seed", "3",
                 "--threads", threads, "--out", str(out)])
        outs.append((out / "cells.csv").read_bytes())
    assert outs[0] == outs[1]


def test_entropy_ml_path(capsys):
    code = run_cli(["entropy", "--data", FIXTURE, "--family", "exponential"])
    assert code == 0
    out = capsys.readouterr().out
    assert "DE_ML" in out and "bias diagnostic" in out


def test_entropy_kde_path_reports_bandwidth_decomposition(capsys):
    code = run_cli(["entropy", "--data", FIXTURE, "--kde", "--null-family", "gamma"])
    assert code == 0
    out = capsys.readouterr().out
    assert "ln scale" in out and "right_skewed_positive" in out
    assert "kappa0" in out and "k_n" in out


def test_entropy_requires_exactly_one_mode():
    code = run_cli(["entropy", "--data", FIXTURE])
    assert code == 2
    code = run_cli(["entropy", "--data", FIXTURE, "--kde"])  # missing null family
    assert code == 2


def test_datasets_listing_and_export(tmp_path, capsys):
    assert run_cli(["datasets"]) == 0
    out = capsys.readouterr().out
    assert "faithful-hardle" in out and "faithful-azzalini" in out
    dest = tmp_path / "f.csv"
    assert run_cli(["datasets", "--name", "faithful-hardle", "--out", str(dest)]) == 0
    assert len(dest.read_text().strip().splitlines()) == 273


def test_config_file_supplies_defaults(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"nboot": 21, "seed": 99}))
    out = tmp_path / "r.json"
    run_cli(["test", "--family", "normal", "--data", FIXTURE,
             "--config", str(cfg), "--threads", "1", "--out", str(out)])
    doc = parse_json(out.read_text())
    assert doc["config"]["nboot"] == 21
    assert doc["config"]["seed"] == 99


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ddetest.cli", "--version"],
        capture_output=True, text=True,
        env={**os.environ, "PYTHONPATH": "src"},
    )
    assert proc.returncode == 0
    assert "ddetest" in proc.stdout
