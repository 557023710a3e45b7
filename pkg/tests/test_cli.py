"""
Unit tests for the command-line entry point.
Tests subcommands, output files and exit codes.
"""

import json
import os
import sys
from unittest.mock import patch

import pytest

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from cli import main
from models import CheckStatus, ValidationCheck, ValidationReport

SCENARIO = """
omega_c = 0.3
t_max = 2.0
n_samples = 21
outputs = ["S_L", "U1", "h1"]

[quench.initial]
omega1 = 1.0
omega2 = 1.5
J = 1.1

[quench.final]
omega1 = 1.3
omega2 = 1.8
J = 0.9
"""


@pytest.fixture
def scenario_file(tmp_path):
    path = tmp_path / "base.toml"
    path.write_text(SCENARIO)
    return path


class TestEvolveCommand:
    """Tests for the evolve subcommand."""

    def test_writes_csv(self, scenario_file, tmp_path):
        out = tmp_path / "out"
        assert main(["evolve", "--config", str(scenario_file), "--out", str(out)]) == 0
        lines = (out / "base.csv").read_text().splitlines()
        assert lines[0] == "t,S_L,S_von,negativity,U1,U2,alpha,gamma,diverged,h1"
        assert len(lines) == 22

    def test_plot(self, scenario_file, tmp_path):
        out = tmp_path / "out"
        assert main(["evolve", "--config", str(scenario_file), "--out", str(out), "--plot"]) == 0
        assert (out / "base_S_L.svg").exists()
        assert (out / "base_U1.svg").exists()

    def test_long_hyperbolic_window(self, tmp_path):
        path = tmp_path / "runaway.toml"
        path.write_text(
            SCENARIO.replace("omega_c = 0.3", "omega_c = 0.2")
            .replace("t_max = 2.0", "t_max = 3000.0")
            .replace("n_samples = 21", "n_samples = 4")
            .replace("J = 0.9", "J = 2.4")
        )
        out = tmp_path / "out"
        assert main(["evolve", "--config", str(path), "--out", str(out)]) == 0
        rows = [line.split(",") for line in (out / "runaway.csv").read_text().splitlines()[1:]]
        assert len(rows) == 4
        assert rows[0][8] == "false"
        assert rows[-1][8] == "true"

    def test_missing_config(self, tmp_path):
        assert main(["evolve", "--config", str(tmp_path / "missing.toml"), "--out", str(tmp_path)]) == 1

    def test_invalid_quench(self, tmp_path):
        path = tmp_path / "bad.toml"
        path.write_text(SCENARIO.replace("omega_c = 0.3", "omega_c = 0.0").replace("J = 1.1", "J = 2.0"))
        assert main(["evolve", "--config", str(path), "--out", str(tmp_path)]) == 1


class TestSweepCommand:
    """Tests for the sweep subcommand."""

    def test_one_file_per_value(self, scenario_file, tmp_path):
        out = tmp_path / "sweep"
        code = main([
            "--workers", "2", "sweep", "--config", str(scenario_file),
            "--axis", "J_f", "--values", "0.5,1.2", "--out", str(out),
        ])
        assert code == 0
        assert sorted(p.name for p in out.iterdir()) == ["base_J_f_0.5.csv", "base_J_f_1.2.csv"]

    def test_partial_failure(self, scenario_file, tmp_path, capsys):
        out = tmp_path / "sweep"
        code = main([
            "sweep", "--config", str(scenario_file), "--axis", "omega_c", "--values", "0.3,-1", "--out", str(out),
        ])
        assert code == 0
        assert "failed" in capsys.readouterr().err
        assert [p.name for p in out.iterdir()] == ["base_omega_c_0.3.csv"]

    def test_all_values_fail(self, scenario_file, tmp_path):
        code = main([
            "sweep", "--config", str(scenario_file), "--axis", "omega_c", "--values", "-1,-2", "--out", str(tmp_path),
        ])
        assert code == 2

    def test_bad_values(self, scenario_file, tmp_path):
        code = main([
            "sweep", "--config", str(scenario_file), "--axis", "J_f", "--values", "a,b", "--out", str(tmp_path),
        ])
        assert code == 1

    def test_unknown_axis(self, scenario_file, tmp_path):
        with pytest.raises(SystemExit):
            main(["sweep", "--config", str(scenario_file), "--axis", "omega_1", "--values", "1", "--out", str(tmp_path)])


class TestFiguresCommand:
    """Tests for the figures subcommand."""

    def test_unknown_figure(self, tmp_path):
        assert main(["figures", "--which", "12", "--out", str(tmp_path)]) == 1

    def test_delegates(self, tmp_path):
        with patch("cli.run_figures", return_value=[]) as mock_run:
            assert main(["figures", "--which", "2,5", "--out", str(tmp_path)]) == 0
        assert mock_run.call_args[0][0] == [2, 5]


class TestValidateCommand:
    """Tests for the validate subcommand."""

    def test_pass(self, capsys):
        report = ValidationReport(checks=[
            ValidationCheck(name="anchor_values", status=CheckStatus.PASS, error=1e-9),
            ValidationCheck(name="von_neumann_linear_entropy_discrepancy", status=CheckStatus.EXPECTED_DIFFERENCE),
        ])
        with patch("cli.run_validate", return_value=report):
            assert main(["validate"]) == 0
        assert "2/2 checks passed" in capsys.readouterr().out

    def test_fail_exit_code(self):
        report = ValidationReport(checks=[ValidationCheck(name="anchor_values", status=CheckStatus.FAIL)])
        with patch("cli.run_validate", return_value=report):
            assert main(["validate"]) == 3

    def test_report_file(self, tmp_path):
        report = ValidationReport(checks=[ValidationCheck(name="anchor_values", status=CheckStatus.FAIL)])
        with patch("cli.run_validate", return_value=report):
            assert main(["validate", "--out", str(tmp_path)]) == 3
        payload = json.loads((tmp_path / "validation.json").read_text())
        assert payload["checks"][0]["name"] == "anchor_values"
        assert payload["checks"][0]["status"] == "fail"

    def test_json(self, capsys):
        report = ValidationReport(checks=[ValidationCheck(name="anchor_values", status=CheckStatus.PASS)])
        with patch("cli.run_validate", return_value=report):
            assert main(["validate", "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["checks"][0]["status"] == "pass"
