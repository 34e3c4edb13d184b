"""End-to-end CLI behavior: commands, config handling, exit codes, output
determinism. Most tests drive main() in process; one subprocess test pins
the installed entry point."""

import json
import math
import subprocess
import sys

import numpy as np
import pytest

from mirrorvis.cli import main

PHYS_CFG = {"mode": "physical", "M_kg": 1e-12, "omega_m_rad_s": 3e3,
            "omega_c_rad_s": 1e15, "L_m": 1e-2, "T_K": 2e-3,
            "gamma_per_s": 3e-2, "lambda_qq": 1.0, "Lambda_nonenv": 0.0}

FREE_CFG = {"mode": "dimensionless", "kappa": 1.0, "Lambda": 0.0,
            "chi": 0.0, "inv_Q": 0.0, "n_bar": 0.0}


def write_cfg(tmp_path, cfg, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


def read_csv(path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# config")
    header = None
    rows = []
    for ln in lines:
        if ln.startswith("#"):
            continue
        if header is None:
            header = ln.split(",")
            continue
        rows.append(ln.split(","))
    return header, rows


class TestParamsCmd:
    def test_operating_point_report(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, PHYS_CFG)
        assert main(["params", "--config", cfg]) == 0
        report = json.loads(capsys.readouterr().out)
        assert set(report) == {"sigma", "kappa", "Lambda_T", "Lambda", "chi",
                               "inv_Q", "n_bar", "omega_tilde", "extinction",
                               "narrowing"}
        assert report["Lambda_T"] == pytest.approx(0.4364, rel=1e-3)
        assert report["n_bar"] == pytest.approx(87279.7, rel=1e-4)

    def test_dimensionless_passthrough(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, {"mode": "dimensionless", "kappa": 1.0,
                                   "Lambda": 0.5, "chi": 0.0, "inv_Q": 1e-5,
                                   "n_bar": 1e5})
        assert main(["params", "--config", cfg]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["kappa"] == 1.0
        assert report["Lambda"] == 0.5
        assert report["n_bar"] == 1e5
        assert report["extinction"] == pytest.approx(0.5)

    def test_missing_key_names_it(self, tmp_path, capsys):
        cfg = dict(PHYS_CFG)
        del cfg["L_m"]
        path = write_cfg(tmp_path, cfg)
        assert main(["params", "--config", path]) == 2
        assert "L_m" in capsys.readouterr().err

    def test_unknown_key_names_it(self, tmp_path, capsys):
        path = write_cfg(tmp_path, {**PHYS_CFG, "mass": 2.0})
        assert main(["params", "--config", path]) == 2
        assert "mass" in capsys.readouterr().err

    def test_missing_config_flag(self, capsys):
        assert main(["params"]) == 2
        assert "--config" in capsys.readouterr().err

    def test_report_written_to_file(self, tmp_path):
        cfg = write_cfg(tmp_path, PHYS_CFG)
        out = tmp_path / "report.json"
        assert main(["params", "--config", cfg, "--out", str(out)]) == 0
        assert json.loads(out.read_text())["inv_Q"] == pytest.approx(1e-5)


class TestVisibilityCmd:
    def test_closed_route_decoherence_free_revival(self, tmp_path):
        cfg = write_cfg(tmp_path, FREE_CFG)
        out = tmp_path / "vis.csv"
        assert main(["visibility", "--config", cfg, "--periods", "2",
                     "--steps-per-period", "200", "--route", "closed",
                     "--out", str(out)]) == 0
        header, rows = read_csv(out)
        assert header == ["tau", "t_s", "nu", "neg_log_nu", "route"]
        assert len(rows) == 401
        tau = np.array([float(r[0]) for r in rows])
        nu = np.array([float(r[2]) for r in rows])
        i = np.argmin(np.abs(tau - 2 * math.pi))
        assert abs(nu[i] - 1.0) < 1e-12

    def test_route_all_spread(self, tmp_path):
        cfg = write_cfg(tmp_path, {"mode": "dimensionless", "kappa": 1.0,
                                   "Lambda": 0.3, "chi": 0.05,
                                   "inv_Q": 1e-4, "n_bar": 5.0})
        out = tmp_path / "vis.csv"
        assert main(["visibility", "--config", cfg, "--periods", "2",
                     "--steps-per-period", "500", "--route", "all",
                     "--out", str(out)]) == 0
        _, rows = read_csv(out)
        by_route = {}
        for r in rows:
            by_route.setdefault(r[4], []).append(float(r[3]))
        assert set(by_route) == {"ode_analytic", "ode_quadrature",
                                 "closed_form"}
        a = np.array(by_route["ode_analytic"])
        b = np.array(by_route["ode_quadrature"])
        c = np.array(by_route["closed_form"])
        den = np.maximum(np.maximum(a, b), 1e-9)
        assert np.max(np.abs(a - b) / den) < 1e-6
        den = np.maximum(np.maximum(a, c), 1e-9)
        assert np.max(np.abs(a - c) / den) < 1e-2

    def test_zero_periods_single_row(self, tmp_path):
        cfg = write_cfg(tmp_path, FREE_CFG)
        out = tmp_path / "vis.csv"
        assert main(["visibility", "--config", cfg, "--periods", "0",
                     "--route", "closed", "--out", str(out)]) == 0
        _, rows = read_csv(out)
        assert len(rows) == 1
        assert float(rows[0][2]) == 1.0

    def test_quadrature_needs_occupation(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, FREE_CFG)
        assert main(["visibility", "--config", cfg, "--route",
                     "quadrature"]) == 2
        assert "n_bar" in capsys.readouterr().err

    def test_route_all_skips_quadrature_at_zero_occupation(self, tmp_path,
                                                           capsys):
        cfg = write_cfg(tmp_path, FREE_CFG)
        out = tmp_path / "vis.csv"
        assert main(["visibility", "--config", cfg, "--periods", "1",
                     "--steps-per-period", "200", "--route", "all",
                     "--out", str(out)]) == 0
        assert "skipping quadrature" in capsys.readouterr().err
        _, rows = read_csv(out)
        assert {r[4] for r in rows} == {"ode_analytic", "closed_form"}

    def test_underresolved_quadrature_is_numerical_error(self, tmp_path,
                                                         capsys):
        cfg = write_cfg(tmp_path, {"mode": "dimensionless", "kappa": 2.0,
                                   "Lambda": 0.1, "chi": 0.05,
                                   "inv_Q": 1e-3, "n_bar": 10.0})
        assert main(["visibility", "--config", cfg, "--periods", "3",
                     "--steps-per-period", "250", "--route", "quadrature",
                     "--quad-order", "20"]) == 3
        assert "order" in capsys.readouterr().err

    def test_byte_identical_reruns(self, tmp_path):
        cfg = write_cfg(tmp_path, {"mode": "dimensionless", "kappa": 1.0,
                                   "Lambda": 0.2, "chi": 0.0,
                                   "inv_Q": 1e-3, "n_bar": 2.0})
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["visibility", "--config", cfg, "--periods", "1",
                "--steps-per-period", "300", "--route", "all"]
        assert main(args + ["--out", str(out1)]) == 0
        assert main(args + ["--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()


class TestRevivalCmd:
    def test_operating_point_summary(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, {"mode": "dimensionless", "kappa": 1.0,
                                   "Lambda": 0.437, "chi": 0.0,
                                   "inv_Q": 1e-5, "n_bar": 8.7e4})
        assert main(["revival", "--config", cfg]) == 0
        report = json.loads(capsys.readouterr().out)
        assert set(report) == {"t1_s", "nu", "neg_log_nu"}
        assert report["neg_log_nu"] == pytest.approx(12 * math.pi * 0.437,
                                                     rel=1e-9)
        assert report["nu"] == pytest.approx(7.0e-8, rel=2e-2)

    def test_overdamped_is_config_error(self, tmp_path):
        cfg = write_cfg(tmp_path, {"mode": "dimensionless", "kappa": 1.0,
                                   "Lambda": 0.0, "chi": 0.0, "inv_Q": 2.5,
                                   "n_bar": 0.0})
        assert main(["revival", "--config", cfg]) == 2


class TestScanCmd:
    def test_writes_grid_and_curve(self, tmp_path, capsys):
        out = tmp_path / "scan.csv"
        assert main(["scan", "--t-points", "6", "--gamma-points", "5",
                     "--out", str(out)]) == 0
        captured = capsys.readouterr()
        assert "T_opt_K" in captured.out
        header, rows = read_csv(out)
        assert header == ["T_K", "gamma_per_s", "Lambda_T", "chi", "n_bar",
                          "nu_t1", "neg_log_nu"]
        assert len(rows) == 30
        curve = tmp_path / "scan_csl.csv"
        cheader, crows = read_csv(curve)
        assert cheader == ["T_K", "gamma_per_s"]
        assert len(crows) == 6

    def test_lambda0_scan_is_separable(self, tmp_path):
        out = tmp_path / "scan.csv"
        assert main(["scan", "--t-points", "5", "--gamma-points", "4",
                     "--lambda-qq", "0", "--out", str(out)]) == 0
        _, rows = read_csv(out)
        nl = np.array([float(r[6]) for r in rows]).reshape(5, 4)
        cross = (nl[0, 0] * nl[3, 2]) / (nl[0, 2] * nl[3, 0])
        assert abs(cross - 1.0) < 1e-12

    def test_flags_override_config(self, tmp_path):
        cfg = write_cfg(tmp_path, {**PHYS_CFG, "lambda_qq": 0.0})
        out = tmp_path / "scan.csv"
        assert main(["scan", "--config", cfg, "--lambda-qq", "1",
                     "--t-points", "3", "--gamma-points", "3",
                     "--out", str(out)]) == 0
        _, rows = read_csv(out)
        assert all(float(r[3]) > 0 for r in rows)  # chi active via the flag

    def test_requires_out(self, capsys):
        assert main(["scan", "--t-points", "2", "--gamma-points", "2"]) == 2
        assert "--out" in capsys.readouterr().err

    def test_byte_identical_and_worker_independent(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["scan", "--t-points", "8", "--gamma-points", "7"]
        assert main(args + ["--workers", "1", "--out", str(a)]) == 0
        assert main(args + ["--workers", "4", "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_partial_grid_warns_per_failed_cell(self, tmp_path, capsys):
        # friction beyond 2*omega_m is overdamped: those cells fail but
        # the scan completes with warnings and NaN rows
        out = tmp_path / "scan.csv"
        assert main(["scan", "--t-points", "2", "--gamma-points", "3",
                     "--gamma-min", "1e3", "--gamma-max", "1e5",
                     "--lambda-qq", "0", "--out", str(out)]) == 0
        err = capsys.readouterr().err
        assert err.count("warning: cell") == 4  # gamma = 1e4, 1e5 columns
        _, rows = read_csv(out)
        assert sum(1 for r in rows if r[6] == "nan") == 4


class TestValidateCmd:
    def test_clean_build_passes(self, capsys):
        assert main(["validate"]) == 0
        out = capsys.readouterr().out
        assert "FAIL" not in out
        assert "all" in out and "passed" in out

    def test_fault_injection_fails_residual_check(self, capsys):
        assert main(["validate", "--fault"]) == 4
        out = capsys.readouterr().out
        assert "FAIL equation-of-motion residual" in out

    def test_tight_stationarity_tolerance_still_passes(self, capsys):
        assert main(["validate", "--stationarity-tol", "1e-12"]) == 0
        assert "FAIL" not in capsys.readouterr().out


def test_installed_entry_point(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(FREE_CFG))
    proc = subprocess.run(
        [sys.executable, "-m", "mirrorvis", "revival", "--config", str(cfg)],
        capture_output=True, text=True)
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert report["nu"] == 1.0
