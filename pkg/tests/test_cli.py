import json
import math
import subprocess
import sys

import pytest

from annulab.cli import run


def read_summary(out_dir, stem):
    with open(out_dir / f"{stem}_summary.json") as fh:
        return json.load(fh)


def test_solve_n3_closed_form(tmp_path):
    code = run(["--out", str(tmp_path), "solve", "--n", "3", "--a", "1", "--b", "2",
                "--base", "full"])
    assert code == 0
    doc = read_summary(tmp_path, "solve")
    assert doc["results"]["lambda"] == pytest.approx(math.pi**2, rel=1e-7)
    assert doc["schema_version"] == "annulab.summary.v1"
    assert doc["library_version"]


def test_bounds_interval(tmp_path):
    code = run(["--out", str(tmp_path), "bounds", "--n", "2", "--a", "1", "--b", "2"])
    assert code == 0
    doc = read_summary(tmp_path, "bounds")
    lo, hi = doc["results"]["interval"]
    assert lo == pytest.approx(math.pi**2 - 0.25, abs=1e-5)
    assert hi == pytest.approx(math.pi**2 - 1.0 / 16.0, abs=1e-5)


def test_sector_csv_row(tmp_path):
    code = run(["--out", str(tmp_path), "sector", "--beta", "0.2", "--nodes", "1024"])
    assert code == 0
    lines = (tmp_path / "sector.csv").read_text().splitlines()
    assert lines[0].startswith("# annulab")
    header = lines[1].split(",")
    row = lines[2].split(",")
    pred = float(row[header.index("predicted_ratio")])
    assert pred == pytest.approx(4096.0)


def test_validation_error_exit_code(tmp_path):
    code = run(["--out", str(tmp_path), "solve", "--a", "2", "--b", "1"])
    assert code == 1


def test_unknown_subcommand_exit_code(tmp_path):
    assert run(["--out", str(tmp_path), "no-such-command"]) == 1


def test_outputs_deterministic(tmp_path):
    d1 = tmp_path / "run1"
    d2 = tmp_path / "run2"
    for d in (d1, d2):
        assert run(["--out", str(d), "hadamard", "--n", "3", "--t", "0.5,1.0",
                    "--grid", "256"]) == 0
    assert (d1 / "hadamard.csv").read_bytes() == (d2 / "hadamard.csv").read_bytes()
    assert (d1 / "hadamard_summary.json").read_bytes() == (d2 / "hadamard_summary.json").read_bytes()


def test_config_file_overrides_defaults(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("n = 3\nb = 1.5\n")
    code = run(["--out", str(tmp_path), "--config", str(cfg), "solve"])
    assert code == 0
    doc = read_summary(tmp_path, "solve")
    assert doc["config"]["b"] == 1.5
    assert doc["results"]["lambda"] == pytest.approx(math.pi**2 / 0.25, rel=1e-6)


def test_out_dir_env_honored(tmp_path, monkeypatch):
    monkeypatch.setenv("OUT_DIR", str(tmp_path / "envout"))
    code = run(["bounds", "--n", "3", "--a", "1", "--b", "2"])
    assert code == 0
    assert (tmp_path / "envout" / "bounds_summary.json").exists()


def test_report_aggregates(tmp_path):
    assert run(["--out", str(tmp_path), "bounds", "--n", "2", "--a", "1", "--b", "2"]) == 0
    assert run(["--out", str(tmp_path), "hadamard", "--n", "3", "--t", "0.5",
                "--grid", "256"]) == 0
    code = run(["--out", str(tmp_path), "report"])
    assert code == 0
    doc = read_summary(tmp_path, "report")
    assert doc["results"]["n_fail"] == 0
    assert doc["results"]["n_pass"] >= 2
    rows = (tmp_path / "report.csv").read_text().splitlines()
    assert len(rows) >= 3  # comment, header, at least two checks


def test_cli_module_entrypoint(tmp_path):
    cp = subprocess.run(
        [sys.executable, "-m", "annulab.cli", "--out", str(tmp_path),
         "caricature", "--kind", "thin", "--n", "2", "--a", "1", "--b", "1.1",
         "--points", "1.05"],
        capture_output=True, text=True,
    )
    assert cp.returncode == 0
    lines = (tmp_path / "caricature.csv").read_text().splitlines()
    assert float(lines[2].split(",")[1]) == pytest.approx(0.05 / 0.1**1.5, rel=1e-10)


def test_failed_check_exit_code(tmp_path):
    # an absurd doubling bound turns the audit check red: exit 2
    code = run(["--out", str(tmp_path), "vd-audit", "--eps", "0.5",
                "--bound", "1.0"])
    assert code == 2
    doc = read_summary(tmp_path, "vd_audit")
    assert doc["checks"][0]["status"] == "fail"
