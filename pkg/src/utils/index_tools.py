"""
添字・置換ヘルパー

置換の符号（sympy）と、添字タプルの分類マスク（全相異・一組のみ一致）を提供する。
公開APIの添字は 1 始まり、内部配列は 0 始まり。
"""

import itertools
from functools import lru_cache
from typing import Iterable, List, Sequence, Tuple

import numpy as np
from sympy.combinatorics import Permutation

from utils.errors import IndexRangeError


def permutation_sign(perm: Sequence[int]) -> int:
    """0..k-1 の置換の符号"""
    if len(perm) <= 1:
        return 1
    return int(Permutation(list(perm)).signature())


def sorting_sign(values: Sequence[int]) -> int:
    """相異な値の並びを昇順に並べ替える置換の符号"""
    ranks = [sorted(values).index(v) for v in values]
    return permutation_sign(ranks)


@lru_cache(maxsize=None)
def signed_permutations(k: int) -> Tuple[Tuple[Tuple[int, ...], int], ...]:
    """k 個の全置換と符号の組"""
    return tuple(
        (perm, permutation_sign(perm)) for perm in itertools.permutations(range(k))
    )


def to_offsets(idx: Iterable[int], rank: int, dim: int) -> Tuple[int, ...]:
    """1 始まりの添字タプルを配列オフセットに変換"""
    idx = tuple(int(i) for i in idx)
    if len(idx) != rank:
        raise IndexRangeError(
            f"添字の長さ {len(idx)} が階数 {rank} と一致しません",
            {"idx": list(idx), "rank": rank},
        )
    for value in idx:
        if not 1 <= value <= dim:
            raise IndexRangeError(
                f"添字 {value} が範囲 1..{dim} の外です",
                {"idx": list(idx), "dim": dim},
            )
    return tuple(value - 1 for value in idx)


@lru_cache(maxsize=None)
def _index_grid(rank: int, dim: int) -> np.ndarray:
    return np.indices((dim,) * rank)


def index_grid(rank: int, dim: int) -> np.ndarray:
    """shape (rank, dim, ..., dim) の添字格子（0 始まり）"""
    return _index_grid(rank, dim)


@lru_cache(maxsize=None)
def _distinct_count(rank: int, dim: int) -> np.ndarray:
    grid = _index_grid(rank, dim)
    flat = grid.reshape(rank, -1).T
    sorted_flat = np.sort(flat, axis=1)
    counts = 1 + np.count_nonzero(np.diff(sorted_flat, axis=1), axis=1)
    return counts.reshape((dim,) * rank)


def distinct_mask(rank: int, dim: int) -> np.ndarray:
    """全ての添字が相異なるタプルのマスク"""
    return _distinct_count(rank, dim) == rank


def single_pair_mask(rank: int, dim: int) -> np.ndarray:
    """ちょうど一組だけ添字が一致し、残りが相異なるタプルのマスク"""
    return _distinct_count(rank, dim) == rank - 1


@lru_cache(maxsize=None)
def single_pair_entries(rank: int, dim: int) -> Tuple[np.ndarray, np.ndarray]:
    """一組一致タプルの配列 (M, rank) と一致位置 (M, 2)"""
    tuples = np.argwhere(single_pair_mask(rank, dim))
    positions = np.zeros((len(tuples), 2), dtype=int)
    for row, values in enumerate(tuples):
        for i, j in itertools.combinations(range(rank), 2):
            if values[i] == values[j]:
                positions[row] = (i, j)
                break
    return tuples, positions


def sorted_distinct_tuples(rank: int, dim: int) -> List[Tuple[int, ...]]:
    """昇順の全相異タプル（1 始まり）"""
    return [tuple(c + 1 for c in combo) for combo in itertools.combinations(range(dim), rank)]


def cyclic_shift(values: np.ndarray, p: int) -> np.ndarray:
    """添字の巡回シフト S(l_1..l_n) = v(l_{1+p}..l_{n+p})"""
    n = values.ndim
    return np.transpose(values, [(d - p) % n for d in range(n)])
