"""
一般化行列モデル

n 個の添字（各 1..N）を持つ複素テンソル GeneralizedMatrix と
Levi-Civita 記号を定義する。全ての力学変数（A, H, ξ, η, C, I）の入れ物。
"""

from dataclasses import dataclass, field
from itertools import permutations
from numbers import Number
from typing import Iterable, Tuple

import numpy as np

from utils.errors import ShapeError
from utils.index_tools import sorting_sign, to_offsets
from utils.log_config import get_logger

logger = get_logger(__name__)


def _check_rank_dim(rank: int, dim: int):
    if rank < 2 or dim < 2:
        raise ShapeError(
            f"階数と次元は 2 以上が必要です (rank={rank}, dim={dim})",
            {"rank": rank, "dim": dim},
        )


@dataclass
class GeneralizedMatrix:
    """階数 rank、次元 dim の一般化行列（密な複素配列）"""
    rank: int
    dim: int
    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        _check_rank_dim(self.rank, self.dim)
        data = np.asarray(self.data, dtype=np.complex128)
        expected = (self.dim,) * self.rank
        if data.shape != expected:
            if data.size == self.dim ** self.rank:
                data = data.reshape(expected)
            else:
                raise ShapeError(
                    f"成分数 {data.size} が dim^rank = {self.dim ** self.rank} と一致しません",
                    {"rank": self.rank, "dim": self.dim},
                )
        self.data = data

    @classmethod
    def from_array(cls, values) -> "GeneralizedMatrix":
        """立方体形状の配列から生成"""
        values = np.asarray(values, dtype=np.complex128)
        if values.ndim < 2 or len(set(values.shape)) != 1:
            raise ShapeError(f"全ての軸の長さが等しい配列が必要です: {values.shape}")
        return cls(rank=values.ndim, dim=values.shape[0], data=values.copy())

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.data.shape

    @property
    def flat(self) -> np.ndarray:
        """行優先の成分列"""
        return self.data.reshape(-1)

    def get(self, idx: Iterable[int]) -> complex:
        """1 始まり添字で成分を取得"""
        return complex(self.data[to_offsets(idx, self.rank, self.dim)])

    def set(self, idx: Iterable[int], value: complex):
        """1 始まり添字で成分を設定（構築時のみ使用）"""
        self.data[to_offsets(idx, self.rank, self.dim)] = value

    def copy(self) -> "GeneralizedMatrix":
        return GeneralizedMatrix(self.rank, self.dim, self.data.copy())

    def check_same_shape(self, other: "GeneralizedMatrix"):
        if not isinstance(other, GeneralizedMatrix) or (self.rank, self.dim) != (other.rank, other.dim):
            raise ShapeError(
                "形状が一致しません",
                {"left": [self.rank, self.dim],
                 "right": [getattr(other, "rank", None), getattr(other, "dim", None)]},
            )

    def __add__(self, other: "GeneralizedMatrix") -> "GeneralizedMatrix":
        self.check_same_shape(other)
        return GeneralizedMatrix(self.rank, self.dim, self.data + other.data)

    def __sub__(self, other: "GeneralizedMatrix") -> "GeneralizedMatrix":
        self.check_same_shape(other)
        return GeneralizedMatrix(self.rank, self.dim, self.data - other.data)

    def __mul__(self, scalar) -> "GeneralizedMatrix":
        if not isinstance(scalar, Number):
            return NotImplemented
        return GeneralizedMatrix(self.rank, self.dim, self.data * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "GeneralizedMatrix":
        return GeneralizedMatrix(self.rank, self.dim, -self.data)

    def hadamard(self, weights: np.ndarray) -> "GeneralizedMatrix":
        """成分ごとの積（固有値配列の作用など）"""
        return GeneralizedMatrix(self.rank, self.dim, self.data * np.asarray(weights))


@dataclass
class LeviCivita:
    """Levi-Civita 記号 ε（値は -1, 0, +1）"""
    rank: int
    dim: int
    values: np.ndarray = field(repr=False)

    def get(self, idx: Iterable[int]) -> int:
        return int(self.values[to_offsets(idx, self.rank, self.dim)])

    def as_matrix(self) -> GeneralizedMatrix:
        return GeneralizedMatrix(self.rank, self.dim, self.values.astype(np.complex128))


def new_zero(rank: int, dim: int) -> GeneralizedMatrix:
    """零行列"""
    _check_rank_dim(rank, dim)
    return GeneralizedMatrix(rank, dim, np.zeros((dim,) * rank, dtype=np.complex128))


def lincomb(a: complex, m1: GeneralizedMatrix, b: complex, m2: GeneralizedMatrix) -> GeneralizedMatrix:
    """成分ごとの線形結合 a·M1 + b·M2"""
    m1.check_same_shape(m2)
    return GeneralizedMatrix(m1.rank, m1.dim, a * m1.data + b * m2.data)


def max_abs_diff(m1: GeneralizedMatrix, m2: GeneralizedMatrix) -> float:
    """成分差の絶対値の最大"""
    m1.check_same_shape(m2)
    return float(np.max(np.abs(m1.data - m2.data)))


def levi_civita(rank: int, dim: int) -> LeviCivita:
    """
    Levi-Civita 記号

    全相異タプルでは昇順への並べ替え置換の符号、それ以外は 0。
    rank > dim のときは全成分 0（警告を出す）。
    """
    _check_rank_dim(rank, dim)
    values = np.zeros((dim,) * rank, dtype=np.int8)
    if rank > dim:
        logger.warning(f"⚠️ rank={rank} > dim={dim} のため Levi-Civita 記号は恒等的に 0 です")
        return LeviCivita(rank, dim, values)

    for offsets in permutations(range(dim), rank):
        values[offsets] = sorting_sign(offsets)
    return LeviCivita(rank, dim, values)
