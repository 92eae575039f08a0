"""
物理モデル定義

ペアテーブル、プランク定数、ハミルトニアン組、時間発展変数、
振動子設定、古典 Nambu 系と軌道を定義する。
"""

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np
import pandas as pd

from core.models.cochain import Cochain
from core.models.generalized_matrix import GeneralizedMatrix
from utils.errors import DomainError, ShapeError, TableValidationError


class HamiltonianBranch:
    """ハミルトニアン組の種類"""
    BOHR = "bohr"              # n=2 の対角ハミルトニアン
    COCYCLE = "cocycle"        # 正規形 n-1 個（組合せ則テーブル）
    COBOUNDARY = "coboundary"  # 正規形 n-2 個 + 単位元 I

    ALL = (BOHR, COCYCLE, COBOUNDARY)


@dataclass
class PairTable:
    """N×N のペアテーブル (h_a)_{lm}"""
    values: np.ndarray
    satisfies_combination_rule: bool = False
    potential: Optional[np.ndarray] = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2 or values.shape[0] != values.shape[1] or values.shape[0] < 2:
            raise ShapeError(f"ペアテーブルは N×N (N≥2) が必要です: {values.shape}")
        self.values = values
        if self.potential is not None:
            self.potential = np.asarray(self.potential, dtype=np.float64)

    @property
    def dim(self) -> int:
        return self.values.shape[0]

    def antisymmetry_defect(self) -> float:
        return float(np.max(np.abs(self.values + self.values.T)))

    def is_antisymmetric(self, tol: float = 1e-12) -> bool:
        return self.antisymmetry_defect() <= tol * max(1.0, float(np.max(np.abs(self.values))))

    def validate_antisymmetric(self, tol: float = 1e-12):
        """反対称性 (E)_{ml} = -(E)_{lm} を検証"""
        if not self.is_antisymmetric(tol):
            raise TableValidationError(
                "ペアテーブルが反対称ではありません",
                {"defect": self.antisymmetry_defect()},
            )

    def combination_defect(self) -> float:
        """組合せ則 (E)_{lm} = (E)_{lk} + (E)_{km} の破れの最大値"""
        v = self.values
        return float(np.max(np.abs(v[:, None, :] - (v[:, :, None] + v[None, :, :]))))

    def scaled(self, factor: float) -> "PairTable":
        potential = None if self.potential is None else self.potential * factor
        return PairTable(self.values * factor, self.satisfies_combination_rule, potential)


@dataclass(frozen=True)
class PlanckConstants:
    """換算プランク定数 ħ と h = 2πħ"""
    hbar: float = 1.0

    def __post_init__(self):
        if not self.hbar > 0:
            raise DomainError(f"ħ は正の値が必要です: {self.hbar}")

    @property
    def h(self) -> float:
        return 2.0 * math.pi * self.hbar


@dataclass
class HamiltonianSet:
    """正規形ハミルトニアンの組と元のテーブル"""
    rank: int
    dim: int
    matrices: List[GeneralizedMatrix]
    tables: List[PairTable]
    constants: PlanckConstants = field(default_factory=PlanckConstants)
    branch: str = HamiltonianBranch.COCYCLE
    shift: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.branch not in HamiltonianBranch.ALL:
            raise DomainError(f"未知のハミルトニアン種別: {self.branch}")
        expected = 1 if self.branch == HamiltonianBranch.BOHR else self.rank - 1
        if len(self.matrices) != expected or len(self.tables) != expected:
            raise ShapeError(
                f"ハミルトニアンは {expected} 個必要です (matrices={len(self.matrices)}, tables={len(self.tables)})"
            )
        for matrix in self.matrices:
            if (matrix.rank, matrix.dim) != (self.rank, self.dim):
                raise ShapeError("ハミルトニアンの形状が組の rank/dim と一致しません")

    @property
    def table_scale(self) -> float:
        """交換子の大きさの目安 Π max|h_a|"""
        scale = 1.0
        for table in self.tables:
            scale *= max(float(np.max(np.abs(table.values))), 1e-300)
        return scale


@dataclass
class EvolvingVariable:
    """A(t) = A(0)·exp(2πiνt) で発展する変数"""
    initial: GeneralizedMatrix
    frequencies: Cochain

    def __post_init__(self):
        if (self.initial.rank, self.initial.dim) != (self.frequencies.arity, self.frequencies.dim):
            raise ShapeError("初期値と振動数の形状が一致しません")


@dataclass
class OscillatorConfig:
    """フェルミオン的調和振動子の設定（n = 2 または 3）"""
    rank: int
    omega: float = 1.0
    constants: PlanckConstants = field(default_factory=PlanckConstants)

    def __post_init__(self):
        if self.rank not in (2, 3):
            raise DomainError(f"振動子は n=2 または 3 のみ対応です: {self.rank}")
        if not self.omega > 0:
            raise DomainError(f"ω は正の値が必要です: {self.omega}")


@dataclass
class NambuSystem:
    """古典 Nambu 系: n 変数と n-1 個のハミルトニアン"""
    dim: int
    hamiltonians: List[Callable[[np.ndarray], float]]
    fd_step_scale: float = 1e-5
    gradients: Optional[List[Callable[[np.ndarray], np.ndarray]]] = None
    expressions: Optional[Sequence[str]] = None
    name: str = "nambu-system"

    def __post_init__(self):
        if self.dim < 2:
            raise DomainError(f"Nambu 系は 2 変数以上が必要です: {self.dim}")
        if len(self.hamiltonians) != self.dim - 1:
            raise ShapeError(f"ハミルトニアンは {self.dim - 1} 個必要です: {len(self.hamiltonians)}")
        if not self.fd_step_scale > 0:
            raise DomainError(f"fd_step_scale は正の値が必要です: {self.fd_step_scale}")

    def invariants(self, x: np.ndarray) -> np.ndarray:
        return np.array([float(func(x)) for func in self.hamiltonians])


@dataclass
class Trajectory:
    """積分軌道と保存量の記録"""
    times: np.ndarray
    points: np.ndarray
    invariants: np.ndarray

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def max_drift(self) -> float:
        """max_a max_t |H_a(x(t)) - H_a(x(0))|"""
        if len(self.invariants) == 0:
            return 0.0
        return float(np.max(np.abs(self.invariants - self.invariants[0])))

    def to_frame(self) -> pd.DataFrame:
        """CSV 出力用の DataFrame（t, x1..xn, H1..H(n-1)）"""
        frame = pd.DataFrame({"t": self.times})
        for i in range(self.points.shape[1]):
            frame[f"x{i + 1}"] = self.points[:, i]
        for a in range(self.invariants.shape[1]):
            frame[f"H{a + 1}"] = self.invariants[:, a]
        return frame
