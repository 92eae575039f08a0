"""
検証エンジン

検証スイートのケースをワーカープールで実行し、レポートを組み立てる。
ケースごとに SeedSequence から独立した乱数列を割り当てるため、
結果はワーカー数や完了順序に依存しない。
"""

import time
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from core.models.report_models import (
    CaseSpec,
    SuiteName,
    VerificationCase,
    VerificationProgress,
    VerificationReport,
    VerificationStatus,
)
from core.workflows.verification_suites import build_cases, resolve_tolerances
from utils.config_helper import get_default_hbar, get_max_workers
from utils.errors import InputSpecError
from utils.log_config import debug_log, get_logger

logger = get_logger(__name__)


class VerificationEngine:
    """検証スイート実行エンジン"""

    def __init__(self,
                 max_workers: Optional[int] = None,
                 progress_callback: Optional[Callable[[VerificationProgress], None]] = None):
        """
        Args:
            max_workers: ワーカー数（未指定時は GMM_THREADS / settings.ini）
            progress_callback: 進捗通知コールバック関数
        """
        self.max_workers = max_workers or get_max_workers()
        self.progress_callback = progress_callback
        self.progress_history: List[VerificationProgress] = []
        logger.info("VerificationEngine initialized.")

    def _notify_progress(self, status: VerificationStatus, step: str,
                         progress_percent: int, message: str,
                         details: Optional[Dict[str, Any]] = None):
        """進捗通知"""
        progress = VerificationProgress(
            status=status,
            step=step,
            progress_percent=progress_percent,
            message=message,
            timestamp=datetime.now(),
            details=details,
        )
        self.progress_history.append(progress)
        debug_log(logger, f"検証進捗: {step} - {message} ({progress_percent}%)", "cli")
        if self.progress_callback:
            self.progress_callback(progress)

    @staticmethod
    def _case_seeds(seed: int, count: int) -> List[int]:
        children = np.random.SeedSequence(seed).spawn(count)
        return [int(child.generate_state(1, dtype=np.uint64)[0]) for child in children]

    @staticmethod
    def _run_case(spec: CaseSpec, case_seed: int) -> VerificationCase:
        try:
            defect, tol = spec.run(np.random.default_rng(case_seed))
            return VerificationCase(
                suite=spec.suite, n=spec.n, dim=spec.dim, seed=case_seed,
                check=spec.check, relation=spec.relation,
                max_defect=float(defect), tol=float(tol), expectation=spec.expectation,
            )
        except Exception as e:
            logger.error(f"❌ 検証ケースエラー: {spec.key}: {e}")
            return VerificationCase(
                suite=spec.suite, n=spec.n, dim=spec.dim, seed=case_seed,
                check=spec.check, relation=spec.relation,
                max_defect=float("nan"), tol=float("nan"), expectation=spec.expectation,
                error=f"{type(e).__name__}: {e}",
            )

    @staticmethod
    def summarize(cases: Sequence[VerificationCase]) -> Dict[str, Any]:
        """スイート別の件数集計"""
        if not cases:
            return {"total": 0, "passed": 0, "failed": 0, "errors": 0, "by_suite": {}}
        frame = pd.DataFrame([
            {"suite": case.suite, "passed": case.passed, "error": case.error is not None}
            for case in cases
        ])
        grouped = frame.groupby("suite").agg(total=("passed", "size"), passed=("passed", "sum"))
        by_suite = {
            suite: {"total": int(row["total"]), "passed": int(row["passed"]),
                    "failed": int(row["total"] - row["passed"])}
            for suite, row in grouped.iterrows()
        }
        passed = int(frame["passed"].sum())
        return {
            "total": len(cases),
            "passed": passed,
            "failed": len(cases) - passed,
            "errors": int(frame["error"].sum()),
            "by_suite": by_suite,
        }

    def run(self, n: int, dim: int, seed: int, suites: Optional[Sequence[str]] = None,
            tol: Optional[float] = None) -> VerificationReport:
        """
        検証の実行

        Args:
            n: 添字数
            dim: レベル数 N
            seed: 乱数シード
            suites: 実行するスイート（未指定で全スイート）
            tol: スケール付き恒等式の許容誤差の上書き

        Returns:
            VerificationReport: キー順に並べたケースと集計
        """
        if n < 2 or dim < 2:
            raise InputSpecError(f"n と N は 2 以上が必要です (n={n}, N={dim})", field="n" if n < 2 else "N")
        suites = list(suites or SuiteName.ALL)
        unknown = [s for s in suites if s not in SuiteName.ALL]
        if unknown:
            raise InputSpecError(f"未知のスイート: {unknown}", field="suite")

        start = time.perf_counter()
        self.progress_history = []
        try:
            logger.info(f"🚀 検証開始: n={n}, N={dim}, seed={seed}, suites={suites}")
            self._notify_progress(VerificationStatus.PREPARING, "BUILD_CASES", 5, "検証ケースを構築中")
            tolerances = resolve_tolerances(tol)
            specs = build_cases(n, dim, seed, suites, tolerances)
            seeds = self._case_seeds(seed, len(specs))

            self._notify_progress(VerificationStatus.RUNNING, "RUN_CASES", 10,
                                  f"{len(specs)} 件のケースを {self.max_workers} ワーカーで実行",
                                  {"cases": len(specs), "workers": self.max_workers})
            results: List[VerificationCase] = []
            with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
                futures = [pool.submit(self._run_case, spec, case_seed) for spec, case_seed in zip(specs, seeds)]
                for i, future in enumerate(futures, start=1):
                    results.append(future.result())
                    self._notify_progress(VerificationStatus.RUNNING, "RUN_CASES",
                                          10 + int(80 * i / max(len(futures), 1)),
                                          f"ケース完了 ({i}/{len(futures)}): {specs[i - 1].check}")

            self._notify_progress(VerificationStatus.ASSEMBLING, "ASSEMBLE_REPORT", 95, "レポートを組み立て中")
            cases = sorted(results, key=lambda case: case.key)
            summary = self.summarize(cases)
            summary["wall_time_seconds"] = round(time.perf_counter() - start, 3)
            report = VerificationReport(
                cases=cases,
                summary=summary,
                parameters={
                    "n": n, "N": dim, "seed": seed, "suites": suites,
                    "tol": tol, "hbar": get_default_hbar(), "tolerances": tolerances,
                },
                progress_history=list(self.progress_history),
            )

            if report.all_passed:
                logger.info(f"✅ 検証完了: {summary['passed']}/{summary['total']} 件合格")
            else:
                failed = [f"{c.suite}/{c.check}" for c in cases if not c.passed]
                logger.warning(f"⚠️ 検証で不合格: {failed}")
            self._notify_progress(VerificationStatus.COMPLETED, "COMPLETED", 100, "検証が完了しました")
            return report

        except Exception as e:
            logger.error(f"❌ 検証エンジンエラー: {e}")
            self._notify_progress(VerificationStatus.FAILED, "FAILED", 0, f"検証に失敗しました: {e}")
            raise

    def get_progress_history(self) -> List[VerificationProgress]:
        """進捗履歴取得"""
        return self.progress_history.copy()
