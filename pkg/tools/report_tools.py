#!/usr/bin/env python3
"""
検証レポートツール

verify が出力したレポートの要約表示と、2 つのレポートの比較を行うツール。
比較では実行ごとに変わる時刻・所要時間のフィールドを除外するため、
同じ (n, N, seed, suite) のレポートは一致する。
"""

import sys
from pathlib import Path
from typing import Any, Dict, List

import pandas as pd

# プロジェクトルートをパスに追加
project_root = Path(__file__).parent.parent
sys.path.append(str(project_root / "src"))

from core.models.report_models import TIMING_FIELDS
from infrastructure.storage.report_storage import ReportStorageManager, dumps_report
from utils.errors import MatrixMechanicsError


def strip_timing(payload: Any) -> Any:
    """時刻・所要時間のフィールドを再帰的に除外"""
    if isinstance(payload, dict):
        return {key: strip_timing(value) for key, value in payload.items() if key not in TIMING_FIELDS}
    if isinstance(payload, list):
        return [strip_timing(value) for value in payload]
    return payload


def reports_equal(left: Dict[str, Any], right: Dict[str, Any]) -> bool:
    """時刻以外のバイト列が一致するか"""
    return dumps_report(strip_timing(left)) == dumps_report(strip_timing(right))


def case_frame(report: Dict[str, Any]) -> pd.DataFrame:
    """ケース一覧を DataFrame に変換"""
    columns = ["suite", "n", "N", "check", "max_defect", "tol", "expectation", "pass"]
    return pd.DataFrame(report.get("cases", []), columns=columns)


def summarize_report(report: Dict[str, Any]) -> pd.DataFrame:
    """スイート別の合格数・最大欠陥"""
    frame = case_frame(report)
    if frame.empty:
        return pd.DataFrame(columns=["suite", "total", "passed", "max_defect"])
    grouped = frame.groupby("suite").agg(
        total=("check", "size"),
        passed=("pass", "sum"),
        max_defect=("max_defect", "max"),
    )
    return grouped.reset_index()


def compare_reports(left: Dict[str, Any], right: Dict[str, Any]) -> List[Dict[str, Any]]:
    """ケース単位の差分（欠陥値・合否が異なるもの）"""
    keys = ["suite", "n", "N", "check"]
    merged = case_frame(left).merge(case_frame(right), on=keys, how="outer",
                                    suffixes=("_left", "_right"), indicator=True)
    differences = []
    for row in merged.to_dict("records"):
        if row["_merge"] != "both":
            differences.append({**{k: row[k] for k in keys}, "reason": f"片方のみ: {row['_merge']}"})
        elif row["pass_left"] != row["pass_right"] or row["max_defect_left"] != row["max_defect_right"]:
            differences.append({
                **{k: row[k] for k in keys},
                "reason": "値が異なる",
                "left": row["max_defect_left"],
                "right": row["max_defect_right"],
            })
    return differences


class ReportTools:
    """レポート操作ツール統合クラス"""

    def __init__(self):
        self.storage = ReportStorageManager()

    def show_summary(self, path: str) -> bool:
        """レポートの要約表示"""
        try:
            report = self.storage.load_json(path)
            parameters = report.get("parameters", {})
            print(f"\n📊 検証レポート: {path}")
            print("=" * 60)
            print(f"n={parameters.get('n')}, N={parameters.get('N')}, seed={parameters.get('seed')}")
            print(summarize_report(report).to_string(index=False))
            failed = [c for c in report.get("cases", []) if not c.get("pass")]
            for case in failed:
                print(f"❌ {case['suite']}/{case['check']}: defect={case.get('max_defect')} tol={case.get('tol')}")
            if not failed:
                print("\n✅ 全ケース合格")
            return not failed
        except MatrixMechanicsError as e:
            print(f"❌ レポート読み込みエラー: {e}")
            return False

    def compare(self, left_path: str, right_path: str) -> bool:
        """2 つのレポートの比較"""
        try:
            left = self.storage.load_json(left_path)
            right = self.storage.load_json(right_path)
        except MatrixMechanicsError as e:
            print(f"❌ レポート読み込みエラー: {e}")
            return False
        if reports_equal(left, right):
            print("✅ レポートは一致しています（時刻フィールドを除く）")
            return True
        print("⚠️ レポートに差分があります")
        for difference in compare_reports(left, right):
            print(f"  {difference}")
        return False


def main(argv: List[str] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    tools = ReportTools()

    if len(argv) == 2 and argv[0] == "summary":
        return 0 if tools.show_summary(argv[1]) else 1
    if len(argv) == 3 and argv[0] == "compare":
        return 0 if tools.compare(argv[1], argv[2]) else 1

    print("利用可能なコマンド:")
    print("  summary <report.json>            - レポートの要約")
    print("  compare <left.json> <right.json> - 時刻を除いた比較")
    return 2


if __name__ == "__main__":
    sys.exit(main())
