"""
代数サービス

n 重積・n 重交換子・n 重反交換子、正規形と単位元を提供する。
"""

import string
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from core.models.generalized_matrix import GeneralizedMatrix, new_zero
from core.models.physics_models import PairTable
from utils.errors import ArityError, DomainError, ShapeError, TableValidationError
from utils.index_tools import (
    distinct_mask,
    signed_permutations,
    single_pair_entries,
    single_pair_mask,
    to_offsets,
)
from utils.log_config import debug_log, get_logger

logger = get_logger(__name__)

_CONTRACTION = "z"


@dataclass
class NormalSpec:
    """正規形の指定: 階数・次元・ペアテーブル"""
    rank: int
    dim: int
    table: PairTable
    require_antisymmetric: bool = True


def _check_factors(factors: Sequence[GeneralizedMatrix]):
    if not factors:
        raise ArityError("因子がありません")
    rank, dim = factors[0].rank, factors[0].dim
    if len(factors) != rank:
        raise ArityError(
            f"n 重積には rank = {rank} 個の因子が必要です（{len(factors)} 個指定）",
            {"rank": rank, "factors": len(factors)},
        )
    for factor in factors[1:]:
        factors[0].check_same_shape(factor)
    return rank, dim


@lru_cache(maxsize=None)
def _product_subscripts(rank: int) -> str:
    """k 番目（0 始まり）の因子は出力位置 rank-1-k を縮約添字に置き換える"""
    out = string.ascii_lowercase[:rank]
    terms = []
    for k in range(rank):
        position = rank - 1 - k
        terms.append(out[:position] + _CONTRACTION + out[position + 1:])
    return ",".join(terms) + "->" + out


def nfold_product(factors: Sequence[GeneralizedMatrix]) -> GeneralizedMatrix:
    """
    n 重積（全成分）

    (A_1 … A_n)_{l_1…l_n} = Σ_{l_{n+1}} Π_k (A_k で位置 n-k+1 を l_{n+1} に置換)
    n=2 では通常の行列積になる。
    """
    rank, dim = _check_factors(factors)
    data = np.einsum(_product_subscripts(rank), *[f.data for f in factors])
    return GeneralizedMatrix(rank, dim, data)


def nfold_product_at(factors: Sequence[GeneralizedMatrix], idx: Sequence[int]) -> complex:
    """n 重積の 1 成分"""
    rank, dim = _check_factors(factors)
    offsets = to_offsets(idx, rank, dim)
    terms = np.ones(dim, dtype=np.complex128)
    for k, factor in enumerate(factors):
        position = rank - 1 - k
        selector = offsets[:position] + (slice(None),) + offsets[position + 1:]
        terms = terms * factor.data[selector]
    return complex(terms.sum())


def _signed_sum(args: Sequence[GeneralizedMatrix], signed: bool) -> GeneralizedMatrix:
    rank, dim = _check_factors(args)
    subscripts = _product_subscripts(rank)
    total = np.zeros((dim,) * rank, dtype=np.complex128)
    for perm, sign in signed_permutations(rank):
        term = np.einsum(subscripts, *[args[p].data for p in perm])
        if signed and sign < 0:
            total -= term
        else:
            total += term
    return GeneralizedMatrix(rank, dim, total)


def nfold_commutator(args: Sequence[GeneralizedMatrix]) -> GeneralizedMatrix:
    """n 重交換子 [A_1, …, A_n] = Σ_P sgn(P) (A_{P1} … A_{Pn})"""
    return _signed_sum(args, signed=True)


def nfold_anticommutator(args: Sequence[GeneralizedMatrix]) -> GeneralizedMatrix:
    """n 重反交換子（全ての並べ方を + で足す）"""
    return _signed_sum(args, signed=False)


def identity_matrix(rank: int, dim: int) -> GeneralizedMatrix:
    """単位元 I: ちょうど一組一致・残り相異のタプルで 1（rank=2 はクロネッカーのデルタ）"""
    if rank == 2:
        return GeneralizedMatrix(2, dim, np.eye(dim, dtype=np.complex128))
    result = new_zero(rank, dim)
    result.data[single_pair_mask(rank, dim)] = 1.0
    return result


def identity_table(rank: int, dim: int) -> PairTable:
    """単位元を正規形として与える定数テーブル 1/(n-2)（対称）"""
    if rank < 3:
        raise DomainError(f"単位元のテーブル表現は n ≥ 3 のみです: {rank}")
    return PairTable(np.full((dim, dim), 1.0 / (rank - 2)))


def normal_matrix(spec: NormalSpec) -> GeneralizedMatrix:
    """
    正規形

    一致位置 (i, j) を持つタプルで Σ_{u≠i,j} c_{l_u l_i}、それ以外は 0。
    """
    table = spec.table
    if table.dim != spec.dim:
        raise ShapeError(f"テーブルの次元 {table.dim} が dim={spec.dim} と一致しません")
    if spec.require_antisymmetric and not table.is_antisymmetric():
        raise TableValidationError(
            "正規形には反対称なテーブルが必要です",
            {"defect": table.antisymmetry_defect()},
        )
    if spec.rank == 2:
        # n=2 では一組一致・残り相異の条件を満たすのは対角成分で、和は空
        return new_zero(2, spec.dim)

    tuples, positions = single_pair_entries(spec.rank, spec.dim)
    result = new_zero(spec.rank, spec.dim)
    if len(tuples) == 0:
        return result
    rows = np.arange(len(tuples))
    reference = tuples[rows, positions[:, 0]]
    contributions = table.values[tuples, reference[:, None]]
    keep = np.ones_like(contributions, dtype=bool)
    keep[rows, positions[:, 0]] = False
    keep[rows, positions[:, 1]] = False
    values = np.where(keep, contributions, 0.0).sum(axis=1)
    result.data[tuple(tuples.T)] = values
    debug_log(logger, f"正規形を構築: rank={spec.rank}, dim={spec.dim}, 非零={len(tuples)}", "algebra")
    return result


def normal_cubic_matrix(table: PairTable, require_antisymmetric: bool = True) -> GeneralizedMatrix:
    """
    n=3 の正規形（ガード因子付き）

    C_{lmn} = c_{lm}(1-δ_{ln})δ_{mn} + c_{mn}(1-δ_{ml})δ_{nl} + c_{nl}(1-δ_{nm})δ_{lm}
    """
    if require_antisymmetric and not table.is_antisymmetric():
        raise TableValidationError("正規形には反対称なテーブルが必要です")
    c = table.values
    delta = np.eye(table.dim)
    guard = 1.0 - delta
    data = (
        np.einsum("lm,ln,mn->lmn", c, guard, delta)
        + np.einsum("mn,ml,nl->lmn", c, guard, delta)
        + np.einsum("nl,nm,lm->lmn", c, guard, delta)
    )
    return GeneralizedMatrix(3, table.dim, data)


def annihilation_defect(b: GeneralizedMatrix, normals: Sequence[GeneralizedMatrix]) -> float:
    """全相異成分が 0 の B と正規形 C_1..C_{n-1} の積 (B C_1 … C_{n-1}) の全相異成分の最大値"""
    product = nfold_product([b] + list(normals))
    mask = distinct_mask(b.rank, b.dim)
    if not mask.any():
        return 0.0
    return float(np.max(np.abs(product.data[mask])))


def reordering_sign(n: int) -> int:
    """H_1..H_{n-2} の並びを逆にしたときの符号 (-1)^{(n-2)(n-3)/2}"""
    if n < 3:
        raise DomainError(f"並べ替え符号は n ≥ 3 で定義されます: {n}")
    return -1 if ((n - 2) * (n - 3) // 2) % 2 else 1
