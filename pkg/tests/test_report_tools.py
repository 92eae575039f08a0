"""
レポートツールのテスト
"""

import json

from report_tools import (
    ReportTools,
    compare_reports,
    main,
    reports_equal,
    strip_timing,
    summarize_report,
)


def _report(defect: float = 1e-14, generated_at: str = "2026-01-01T00:00:00") -> dict:
    return {
        "parameters": {"n": 3, "N": 4, "seed": 42},
        "cases": [
            {"suite": "algebra", "n": 3, "N": 4, "check": "commutator_linearity",
             "max_defect": defect, "tol": 1e-10, "expectation": "holds", "pass": defect <= 1e-10},
            {"suite": "cohomology", "n": 3, "N": 4, "check": "nu_cocycle",
             "max_defect": 0.0, "tol": 1e-10, "expectation": "holds", "pass": True},
        ],
        "summary": {"total": 2, "wall_time_seconds": 0.25},
        "generated_at": generated_at,
    }


def test_strip_timing_is_recursive():
    stripped = strip_timing(_report())
    assert "generated_at" not in stripped
    assert "wall_time_seconds" not in stripped["summary"]
    assert stripped["summary"]["total"] == 2


def test_reports_equal_ignores_timing():
    assert reports_equal(_report(generated_at="a"), _report(generated_at="b"))
    assert not reports_equal(_report(1e-14), _report(2e-14))


def test_compare_reports_lists_changed_cases():
    differences = compare_reports(_report(1e-14), _report(1.0))
    assert len(differences) == 1
    assert differences[0]["check"] == "commutator_linearity"
    assert differences[0]["right"] == 1.0


def test_compare_reports_missing_case():
    shorter = _report()
    shorter["cases"] = shorter["cases"][:1]
    differences = compare_reports(_report(), shorter)
    assert [d["check"] for d in differences] == ["nu_cocycle"]


def test_summarize_report():
    summary = summarize_report(_report(1.0)).set_index("suite")
    assert summary.loc["algebra", "total"] == 1
    assert summary.loc["algebra", "passed"] == 0
    assert summary.loc["cohomology", "passed"] == 1


def test_show_summary_and_compare(tmp_path, capsys):
    left = tmp_path / "left.json"
    right = tmp_path / "right.json"
    left.write_text(json.dumps(_report()), encoding="utf-8")
    right.write_text(json.dumps(_report(generated_at="later")), encoding="utf-8")
    tools = ReportTools()
    assert tools.show_summary(str(left))
    assert tools.compare(str(left), str(right))
    assert "✅" in capsys.readouterr().out
    assert not tools.show_summary(str(tmp_path / "missing.json"))


def test_main_usage():
    assert main([]) == 2
    assert main(["unknown", "x"]) == 2
