"""Command-line interface: exit codes, CSV stability, flag handling."""

import math
import pathlib

import pytest

from mmwcov.cli import (EXIT_CONFIG, EXIT_OK, EXIT_QUADRATURE,
                        EXIT_VALIDATION, CliError, _apply_sweep, _parse_grid,
                        _parse_sweep, main)
from mmwcov.model import cluster_scale

SCENARIO = str(pathlib.Path(__file__).resolve().parent.parent
               / "scenarios" / "table2.scenario")


def test_parse_grid_linspace():
    assert _parse_grid("0:10:5") == [0.0, 2.5, 5.0, 7.5, 10.0]
    assert _parse_grid("-10:-10:1") == [-10.0]
    assert _parse_grid("3,1,4") == [3.0, 1.0, 4.0]


def test_parse_grid_rejects_garbage():
    with pytest.raises(CliError):
        _parse_grid("1:2")
    with pytest.raises(CliError):
        _parse_grid("a,b")
    with pytest.raises(CliError):
        _parse_grid("1:5:0")


def test_parse_sweep():
    assert _parse_sweep("cluster=1,5") == ("cluster", [1.0, 5.0])
    assert _parse_sweep("bias2=0:6:3") == ("bias2", [0.0, 3.0, 6.0])
    with pytest.raises(CliError):
        _parse_sweep("cluster")
    with pytest.raises(CliError):
        _parse_sweep("sigma=1,2")


def test_apply_sweep(table2):
    assert cluster_scale(_apply_sweep(table2, "cluster", 3.5).cluster) == 3.5
    assert _apply_sweep(table2, "main_gain_db", 20.0).antenna.main_gain_db == 20.0
    assert _apply_sweep(table2, "beamwidth_rad", 1.0).antenna.beamwidth_rad == 1.0
    assert _apply_sweep(table2, "bias2", 5.0).tiers[1].bias == 5.0
    assert _apply_sweep(table2, "bias0", 5.0).tier0.bias == 5.0
    with pytest.raises(CliError):
        _apply_sweep(table2, "bias9", 5.0)


def _read(path):
    return pathlib.Path(path).read_bytes()


def test_association_runs_and_is_byte_stable(tmp_path):
    out1 = str(tmp_path / "a1.csv")
    out2 = str(tmp_path / "a2.csv")
    args = ["association", "--scenario", SCENARIO,
            "--sweep", "cluster=5,20", "--tol", "1e-6"]
    assert main(args + ["--out", out1]) == EXIT_OK
    assert main(args + ["--out", out2]) == EXIT_OK
    assert _read(out1) == _read(out2)
    text = pathlib.Path(out1).read_text()
    assert text.startswith("# tool: mmwcov")
    assert "scenario-sha256:" in text
    header = [l for l in text.splitlines() if not l.startswith("#")][0]
    assert header.split(",")[:4] == ["cluster", "A0", "A1", "A2"]
    assert text.endswith("\n") and "\r" not in text


def test_coverage_runs(tmp_path):
    out = str(tmp_path / "c.csv")
    code = main(["coverage", "--scenario", SCENARIO, "--thresholds=-5,5",
                 "--snr", "--out", out])
    assert code == EXIT_OK
    lines = [l for l in pathlib.Path(out).read_text().splitlines()
             if not l.startswith("#")]
    cols = lines[0].split(",")
    assert "snr_coverage" in cols
    assert "converged" in cols
    rows = [l.split(",") for l in lines[1:]]
    assert len(rows) == 2
    snr = cols.index("snr_coverage")
    cov = cols.index("coverage")
    for r in rows:
        assert float(r[snr]) >= float(r[cov]) - 1e-10
        assert r[-1] == "1"


def test_coverage_ppp_baseline_drops_center(tmp_path):
    out = str(tmp_path / "p.csv")
    code = main(["coverage", "--scenario", SCENARIO, "--thresholds=0",
                 "--ppp-baseline", "--out", out])
    assert code == EXIT_OK
    text = pathlib.Path(out).read_text()
    assert "ppp-baseline: true" in text
    header = [l for l in text.splitlines() if not l.startswith("#")][0]
    assert "cov0_LOS" not in header
    assert "cov1_LOS" in header


def test_simulate_worker_invariant_bytes(tmp_path):
    base = ["simulate", "--scenario", SCENARIO, "--thresholds=0,10",
            "--trials", "800", "--seed", "3"]
    out1 = str(tmp_path / "w1.csv")
    out8 = str(tmp_path / "w8.csv")
    assert main(base + ["--workers", "1", "--out", out1]) == EXIT_OK
    assert main(base + ["--workers", "4", "--out", out8]) == EXIT_OK
    assert _read(out1) == _read(out8)
    text = pathlib.Path(out1).read_text()
    assert "# seed: 3" in text
    assert "# association 0 LOS:" in text


def test_validate_passes_on_consistent_pipelines(capsys):
    code = main(["validate", "--scenario", SCENARIO, "--thresholds=0",
                 "--trials", "4000", "--seed", "2", "--tol", "0.02"])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    assert "PASSED" in out


def test_validate_detects_corruption(capsys):
    code = main(["validate", "--scenario", SCENARIO, "--thresholds=0",
                 "--trials", "8000", "--seed", "2", "--tol", "0.02",
                 "--debug-corrupt-kappa"])
    out = capsys.readouterr().out
    assert code == EXIT_VALIDATION
    assert "FAILED" in out
    assert "worst offender" in out


def test_missing_scenario_is_config_error(tmp_path, capsys):
    code = main(["association", "--scenario", str(tmp_path / "nope.toml"),
                 "--out", str(tmp_path / "x.csv")])
    assert code == EXIT_CONFIG
    assert "not found" in capsys.readouterr().err


def test_invalid_scenario_is_config_error(tmp_path, capsys):
    bad = tmp_path / "bad.scenario"
    bad.write_text(
        pathlib.Path(SCENARIO).read_text().replace(
            "density = 1e-4", "density = -1e-4"))
    code = main(["association", "--scenario", str(bad),
                 "--out", str(tmp_path / "x.csv")])
    assert code == EXIT_CONFIG
    assert "density" in capsys.readouterr().err


def test_bad_sweep_is_config_error(tmp_path, capsys):
    code = main(["association", "--scenario", SCENARIO,
                 "--sweep", "nonsense=1,2", "--out", str(tmp_path / "x.csv")])
    assert code == EXIT_CONFIG
    assert "sweep" in capsys.readouterr().err


def test_unreachable_tolerance_is_quadrature_error(tmp_path):
    code = main(["coverage", "--scenario", SCENARIO, "--thresholds=0",
                 "--tol", "1e-16", "--out", str(tmp_path / "x.csv")])
    assert code == EXIT_QUADRATURE


def test_coverage_nan_column_for_failed_points(tmp_path):
    # a failing tolerance still writes the CSV with converged = 0
    out = str(tmp_path / "c.csv")
    main(["coverage", "--scenario", SCENARIO, "--thresholds=0",
          "--tol", "1e-16", "--out", out])
    lines = [l for l in pathlib.Path(out).read_text().splitlines()
             if not l.startswith("#")]
    assert lines[1].split(",")[-1] == "0"
