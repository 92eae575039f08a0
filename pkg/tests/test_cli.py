"""
コマンドラインのテスト（終了コードと出力形式）
"""

import json
import math
import subprocess
import sys

import pandas as pd
import pytest

from app.main import main, spectrum_payload
from utils.errors import ExitCode


def _error_payload(err: str) -> dict:
    return json.loads(err[err.index('{\n  "error"'):])


class TestVerifyCommand:
    """verify サブコマンド"""

    def test_writes_report(self, tmp_path):
        out = tmp_path / "report.json"
        code = main(["verify", "--n", "3", "--dim", "3", "--seed", "1", "--suite", "algebra", "--out", str(out)])
        assert code == ExitCode.SUCCESS
        report = json.loads(out.read_text(encoding="utf-8"))
        assert report["parameters"]["suites"] == ["algebra"]
        assert all(case["pass"] for case in report["cases"])

    def test_stdout_when_no_out(self, capsys):
        assert main(["verify", "--n", "2", "--dim", "3", "--suite", "cohomology"]) == ExitCode.SUCCESS
        report = json.loads(capsys.readouterr().out)
        assert report["parameters"]["n"] == 2

    @pytest.mark.parametrize("argv", [
        ["verify", "--n", "1"],
        ["verify", "--dim", "0"],
        ["verify", "--suite", "unknown"],
        ["verify", "--tol", "-1"],
        ["oscillator", "--n", "4"],
        ["oscillator", "--n", "2", "--omega", "0"],
    ])
    def test_usage_errors_exit_2(self, argv):
        with pytest.raises(SystemExit) as excinfo:
            main(argv)
        assert excinfo.value.code == ExitCode.USAGE_ERROR


class TestSpectrumCommand:
    """spectrum サブコマンド"""

    def test_potentials_sample(self, samples_dir):
        payload = spectrum_payload(str(samples_dir / "spectrum_n3_potentials.json"))
        assert payload["branch"] == "cocycle"
        assert payload["nu"][0]["idx"] == [1, 2, 3]
        assert payload["nu"][0]["value"] == pytest.approx(-3 / math.pi)
        assert payload["is_cocycle"]
        assert payload["eigenvalue_probe_defect"] < 1e-9

    def test_hydrogen_sample(self, samples_dir, tmp_path):
        out = tmp_path / "spectrum.json"
        code = main(["spectrum", "--input", str(samples_dir / "spectrum_n2_hydrogen.json"), "--out", str(out)])
        assert code == ExitCode.SUCCESS
        payload = json.loads(out.read_text(encoding="utf-8"))
        assert payload["branch"] == "bohr"
        assert len(payload["nu"]) == 6
        assert payload["nu"][0]["value"] == pytest.approx(-0.75 / (2 * math.pi))
        assert payload["ritz_defect_max"] < 1e-12

    def test_coboundary_sample(self, samples_dir):
        payload = spectrum_payload(str(samples_dir / "spectrum_n4_coboundary.json"))
        assert payload["branch"] == "coboundary"
        assert payload["is_cocycle"]

    def test_invalid_input_exit_2(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"n": 3, "potentials": [[0, 1, 2], [0, 1, 4]]}), encoding="utf-8")
        assert main(["spectrum", "--input", str(path)]) == ExitCode.USAGE_ERROR
        error = _error_payload(capsys.readouterr().err)["error"]
        assert error["code"] == "GMM-201"
        assert error["details"]["field"] == "N"

    def test_missing_input_exit_3(self, tmp_path):
        assert main(["spectrum", "--input", str(tmp_path / "missing.json")]) == ExitCode.IO_ERROR


class TestOscillatorCommand:
    """oscillator サブコマンド"""

    @pytest.mark.parametrize("rank", ["2", "3"])
    def test_relations_hold(self, rank, tmp_path):
        out = tmp_path / "oscillator.json"
        code = main(["oscillator", "--n", rank, "--omega", "1.3", "--times", "0,0.5,2.5", "--out", str(out)])
        assert code == ExitCode.SUCCESS
        payload = json.loads(out.read_text(encoding="utf-8"))
        assert payload["n"] == int(rank)
        assert payload["times"] == [0.0, 0.5, 2.5]
        assert payload["pass"] is True


class TestNambuCommand:
    """nambu サブコマンド"""

    def test_rigid_body(self, samples_dir, tmp_path, capsys):
        out = tmp_path / "traj.csv"
        code = main(["nambu", "--system", str(samples_dir / "nambu_rigid_body.json"),
                     "--x0", "1,0.5,0.2", "--t1", "1", "--dt", "0.01", "--out", str(out)])
        assert code == ExitCode.SUCCESS
        summary = json.loads(capsys.readouterr().out)
        assert summary["status"] == "completed"
        assert summary["steps"] == 100
        assert max(summary["max_drift"].values()) < 1e-6
        frame = pd.read_csv(out)
        assert list(frame.columns) == ["t", "x1", "x2", "x3", "H1", "H2"]
        assert len(frame) == 101

    def test_divergence_exit_4(self, samples_dir, tmp_path, capsys):
        out = tmp_path / "traj.csv"
        summary_path = tmp_path / "summary.json"
        code = main(["nambu", "--system", str(samples_dir / "nambu_blowup.json"),
                     "--x0", "1,1", "--t1", "3", "--dt", "0.001",
                     "--out", str(out), "--summary", str(summary_path)])
        assert code == ExitCode.DIVERGENCE
        summary = json.loads(summary_path.read_text(encoding="utf-8"))
        assert summary["status"] == "diverged"
        frame = pd.read_csv(out)
        assert 0 < len(frame) < 3001
        assert _error_payload(capsys.readouterr().err)["error"]["category"] == "DIVERGENCE_ERROR"

    def test_dimension_mismatch_exit_2(self, samples_dir, tmp_path):
        code = main(["nambu", "--system", str(samples_dir / "nambu_rigid_body.json"),
                     "--x0", "1,0", "--t1", "1", "--out", str(tmp_path / "traj.csv")])
        assert code == ExitCode.USAGE_ERROR


def test_entry_point_subprocess(project_root, tmp_path):
    out = tmp_path / "report.json"
    proc = subprocess.run(
        [sys.executable, "app.py", "verify", "--n", "3", "--dim", "3", "--suite", "algebra", "--out", str(out)],
        cwd=project_root, capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(out.read_text(encoding="utf-8"))["summary"]["failed"] == 0
