import csv
import io
import json
import math
import subprocess
import sys

import pytest

from cvtradeoff import cli
from cvtradeoff.tradeoff import SQRT_2_3, cv_bound

SQ = 1 / math.sqrt(2)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, list(csv.DictReader(io.StringIO(out)))


class TestFidelity:
    def test_single_point(self, capsys):
        code, rows = run(capsys, "fidelity", "--sigma", str(SQ), "--tau", str(SQ), "--delta", "1", "--kappa", "1")
        assert code == 0 and len(rows) == 1
        assert float(rows[0]["F"]) == pytest.approx(SQRT_2_3, abs=1e-6)
        assert float(rows[0]["G"]) == pytest.approx(SQ, abs=1e-6)

    def test_grid_shape(self, capsys):
        cli.main(["fidelity", "--sweep", "theta:0:1.5:4", "--sweep", "sigma:0.2:2:4", "--sweep", "tau:0.4:2:3"])
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0].startswith("theta,sigma,tau")
        assert len(lines) == 49

    def test_oracle_columns(self, capsys):
        code, rows = run(capsys, "fidelity", "--sweep", "theta:0:1.5:3", "--sigma", "0.4", "--oracle")
        assert code == 0
        for r in rows:
            assert abs(float(r["F"]) - float(r["F_oracle"])) <= 1e-6
            assert abs(float(r["G"]) - float(r["G_oracle"])) <= 1e-6

    def test_json_config_and_override(self, capsys, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({"sigma": 1.0, "tau": 1.0, "theta": 0.0}))
        _, rows = run(capsys, "fidelity", "--config", str(cfg))
        assert float(rows[0]["F"]) == pytest.approx(SQRT_2_3, abs=1e-8)
        _, rows = run(capsys, "fidelity", "--config", str(cfg), "--sigma", str(SQ))
        assert float(rows[0]["sigma"]) == pytest.approx(SQ, abs=1e-8)
        assert float(rows[0]["F"]) == pytest.approx(SQ, abs=1e-8)

    @pytest.mark.parametrize(
        "argv",
        [
            ["fidelity", "--sigma", "-1"],
            ["fidelity", "--sweep", "theta:0:1"],
            ["fidelity", "--sweep", "bogus:0:1:3"],
            ["curve"],
            ["curve", "--figure", "9"],
            ["nonsense"],
        ],
    )
    def test_usage_errors(self, argv, capsys):
        with pytest.raises(SystemExit) as exc:
            sys.exit(cli.main(argv))
        assert exc.value.code == 1
        assert "error" in capsys.readouterr().err

    def test_bad_config_file(self, capsys, tmp_path):
        cfg = tmp_path / "bad.json"
        cfg.write_text(json.dumps({"nope": 1}))
        assert cli.main(["fidelity", "--config", str(cfg)]) == 1


class TestCurve:
    @pytest.mark.parametrize("figure", ["3", "4", "4c", "5"])
    def test_values_in_unit_interval(self, figure, capsys):
        code, rows = run(capsys, "curve", "--figure", figure, "--bounds")
        assert code == 0 and rows
        for r in rows:
            assert 0.0 <= float(r["F"]) <= 1.0 and 0.0 <= float(r["G"]) <= 1.0

    def test_figure_A_large_alphabet(self, capsys):
        _, rows = run(capsys, "curve", "--figure", "3")
        first = next(r for r in rows if float(r["param"]) == 10000)
        assert float(first["G"]) == pytest.approx(SQRT_2_3, abs=1e-4)
        assert float(first["F"]) == 0.0

    def test_config_C_uniform_limit(self, capsys):
        _, rows = run(capsys, "curve", "--which", "C", "--delta", "1e4")
        gaps = [abs(float(r["F"]) - cv_bound(float(r["G"]))) for r in rows if float(r["G"]) < SQRT_2_3 - 1e-9]
        assert max(gaps) <= 1e-3

    def test_qudit_endpoints(self, capsys):
        _, rows = run(capsys, "curve", "--which", "QUDIT", "--d", "2")
        G = [float(r["G"]) for r in rows]
        assert G[0] == pytest.approx(1 / 3, abs=1e-8) and G[-1] == pytest.approx(2 / 3, abs=1e-8)

    def test_rows_monotone_in_sweep(self, capsys):
        _, rows = run(capsys, "curve", "--which", "B", "--y", "3")
        sweep = [float(r["sweep_value"]) for r in rows]
        assert sweep == sorted(sweep)

    def test_compare_labels(self, capsys):
        _, rows = run(capsys, "curve", "--figure", "5", "--points", "11")
        assert {r["config"] for r in rows} == {"CMP_B", "CMP_C"}
        assert len(rows) == 2 * 5 * 11


class TestSurface:
    def test_default_dimensions(self, capsys):
        _, rows = run(capsys, "surface")
        assert len(rows) == 3 * 21 * 21

    def test_requested_dimensions(self, capsys):
        _, rows = run(capsys, "surface", "--sweep", "sigma:0.2:2:5", "--sweep", "theta:0:1.5:7", "--sweep", "tau:1:1:1")
        assert len(rows) == 35

    def test_flat_row_and_argmax(self, capsys):
        _, rows = run(capsys, "surface")
        flat = [r for r in rows if abs(float(r["sigma"]) - SQ) < 1e-8 and abs(float(r["tau"]) - 0.4) < 1e-8]
        assert len(flat) == 21
        F = [float(r["F"]) for r in flat]
        assert max(F) - min(F) <= 1e-8  # CSV keeps 9 significant digits
        narrow = [r for r in rows if abs(float(r["sigma"]) - 0.2) < 1e-8 and abs(float(r["tau"]) - 0.4) < 1e-8]
        best = max(narrow, key=lambda r: float(r["F"]))
        assert float(best["theta"]) == pytest.approx(math.pi / 2, abs=1e-8)


class TestOptimizeCheckMc:
    def test_optimize_B(self, capsys):
        _, rows = run(capsys, "optimize", "--which", "B", "--delta", "1", "--tau", "1", "--sigma", str(SQ))
        assert float(rows[0]["kappa_closed"]) == pytest.approx(0.4, abs=1e-9)
        assert float(rows[0]["kappa_numeric"]) == pytest.approx(0.4, abs=1e-6)

    def test_check(self, tmp_path):
        out = tmp_path / "check.csv"
        assert cli.main(["check", "--out", str(out)]) == 0
        rows = list(csv.DictReader(out.open()))
        statuses = {r["status"] for r in rows}
        assert "FAIL" not in statuses and "KNOWN" in statuses
        assert {r["quantity"] for r in rows if r["status"] == "KNOWN"} <= {"config_C_G_printed", "curve_C_printed"}

    def test_mc_files_identical(self, tmp_path):
        paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for path in paths:
            assert cli.main(["mc", "--seed", "42", "--trials", "20000", "--theta", "0.5", "--out", str(path)]) == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_console_script(self):
        proc = subprocess.run(
            [sys.executable, "-m", "cvtradeoff.cli", "fidelity", "--theta", "0.3"], capture_output=True, text=True
        )
        assert proc.returncode == 0
        assert proc.stdout.splitlines()[0] == "theta,sigma,tau,delta,kappa,F,G"
