"""
検証レポートモデル定義
検証ワークフローで使用するデータモデルを統一管理
"""

import math
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Tuple


class SuiteName:
    """検証スイートの定義"""
    ALGEBRA = "algebra"
    COHOMOLOGY = "cohomology"
    SPECTRUM = "spectrum"
    DYNAMICS = "dynamics"
    OSCILLATOR = "oscillator"
    NAMBU = "nambu"

    ALL = (ALGEBRA, COHOMOLOGY, SPECTRUM, DYNAMICS, OSCILLATOR, NAMBU)


class Expectation:
    """ケースの期待値"""
    HOLDS = "holds"        # 欠陥が許容誤差以下で合格
    VIOLATED = "violated"  # 反例: 欠陥が許容誤差を超えて合格


class VerificationStatus(Enum):
    """検証実行ステータス"""
    PREPARING = "preparing"
    RUNNING = "running"
    ASSEMBLING = "assembling"
    COMPLETED = "completed"
    FAILED = "failed"


# レポートの中で実行ごとに変わるフィールド（比較時は除外）
TIMING_FIELDS = ("generated_at", "wall_time_seconds")


@dataclass
class VerificationProgress:
    """検証進捗情報"""
    status: VerificationStatus
    step: str
    progress_percent: int
    message: str
    timestamp: datetime
    details: Optional[Dict[str, Any]] = None


@dataclass
class CaseSpec:
    """実行前の検証ケース（乱数生成器を受け取り (欠陥, 許容誤差) を返す）"""
    suite: str
    n: int
    dim: int
    check: str
    relation: str
    run: Callable[[Any], Tuple[float, float]] = field(repr=False)
    expectation: str = Expectation.HOLDS

    @property
    def key(self) -> Tuple[str, int, int, str]:
        return (self.suite, self.n, self.dim, self.check)


@dataclass
class VerificationCase:
    """検証ケースの結果"""
    suite: str
    n: int
    dim: int
    seed: int
    check: str
    relation: str
    max_defect: float
    tol: float
    expectation: str = Expectation.HOLDS
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        if self.error is not None:
            return False
        if self.expectation == Expectation.VIOLATED:
            return self.max_defect > self.tol
        return self.max_defect <= self.tol

    @property
    def key(self) -> Tuple[str, int, int, str]:
        return (self.suite, self.n, self.dim, self.check)

    def to_dict(self) -> Dict[str, Any]:
        result = {
            "suite": self.suite,
            "n": self.n,
            "N": self.dim,
            "seed": self.seed,
            "check": self.check,
            "relation": self.relation,
            "max_defect": self.max_defect if math.isfinite(self.max_defect) else None,
            "tol": self.tol if math.isfinite(self.tol) else None,
            "expectation": self.expectation,
            "pass": self.passed,
        }
        if self.error is not None:
            result["error"] = self.error
        return result


@dataclass
class VerificationReport:
    """検証レポート"""
    cases: List[VerificationCase]
    summary: Dict[str, Any]
    parameters: Dict[str, Any]
    generated_at: str = field(default_factory=lambda: datetime.now().isoformat())
    progress_history: Optional[List[VerificationProgress]] = None

    @property
    def all_passed(self) -> bool:
        return all(case.passed for case in self.cases)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "parameters": self.parameters,
            "cases": [case.to_dict() for case in self.cases],
            "summary": self.summary,
            "generated_at": self.generated_at,
        }
