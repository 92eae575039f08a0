"""
コチェインモデル

k 添字の実数配列。振動数 ν, ν⁰, ν̃ や固有値 f の入れ物。
"""

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from utils.errors import ShapeError
from utils.index_tools import to_offsets


@dataclass
class Cochain:
    """k 添字の実コチェイン（密配列）"""
    arity: int
    dim: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != (self.dim,) * self.arity:
            raise ShapeError(
                f"コチェインの形状 {values.shape} が ({self.dim},)*{self.arity} と一致しません",
                {"arity": self.arity, "dim": self.dim},
            )
        self.values = values

    @classmethod
    def from_array(cls, values) -> "Cochain":
        values = np.asarray(values, dtype=np.float64)
        dim = values.shape[0] if values.ndim else 0
        return cls(arity=values.ndim, dim=dim, values=values)

    def get(self, idx: Iterable[int]) -> float:
        """1 始まり添字で値を取得"""
        return float(self.values[to_offsets(idx, self.arity, self.dim)])

    @property
    def scale(self) -> float:
        """許容誤差のスケール（最大絶対値、下限 1）"""
        if self.values.size == 0:
            return 1.0
        return max(float(np.max(np.abs(self.values))), 1.0)

    def antisymmetry_defect(self) -> float:
        """隣接転置での反対称性の破れの最大値"""
        defect = 0.0
        for axis in range(self.arity - 1):
            swapped = np.swapaxes(self.values, axis, axis + 1)
            defect = max(defect, float(np.max(np.abs(swapped + self.values))))
        return defect

    def __add__(self, other: "Cochain") -> "Cochain":
        return Cochain(self.arity, self.dim, self.values + other.values)

    def __mul__(self, scalar: float) -> "Cochain":
        return Cochain(self.arity, self.dim, self.values * scalar)

    __rmul__ = __mul__
