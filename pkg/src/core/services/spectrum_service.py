"""
スペクトルサービス

ペアテーブルから振動数コチェインを構築する:
基準添字つきの ν⁰、巡回的な ν、コバウンダリ解 ν̃、Bohr 振動数、
β/γ 定数と対応原理の収束チェック。
"""

from typing import Callable, List, Optional, Sequence

import numpy as np
import sympy as sp

from core.models.cochain import Cochain
from core.models.physics_models import PairTable, PlanckConstants
from core.services.cohomology_service import coboundary
from utils.errors import ArityError, DomainError, ShapeError
from utils.index_tools import cyclic_shift, index_grid, signed_permutations, to_offsets
from utils.log_config import debug_log, get_logger

logger = get_logger(__name__)


# ---------------------------------------------------------------------------
# テーブルと定数
# ---------------------------------------------------------------------------

def pairtable_from_potential(e: Sequence[float]) -> PairTable:
    """(E)_{lm} = e_l - e_m（組合せ則を満たす）"""
    e = np.asarray(e, dtype=np.float64)
    if e.ndim != 1 or e.size < 2:
        raise ShapeError(f"ポテンシャルは長さ 2 以上のベクトルが必要です: {e.shape}")
    return PairTable(e[:, None] - e[None, :], satisfies_combination_rule=True, potential=e)


def hydrogen_levels(dim: int, hcr: float = 1.0) -> np.ndarray:
    """水素原子型の準位 E_n = -hcR/n²（n = 1..N）"""
    levels = np.arange(1, dim + 1, dtype=np.float64)
    return -hcr / levels ** 2


def gamma(n: int) -> int:
    """ハミルトニアンの全順序和から生じる多重度 n-2"""
    if n < 3:
        raise DomainError(f"γ は n ≥ 3 で定義されます（n=2 は Bohr の式）: {n}")
    return n - 2


def published_gamma(n: int) -> int:
    """公表値: n 奇数で 1、n 偶数で n-2（n=3 と偶数 n で gamma と一致）"""
    if n < 3:
        raise DomainError(f"γ は n ≥ 3 で定義されます（n=2 は Bohr の式）: {n}")
    return 1 if n % 2 else n - 2


def _beta_sign(n: int) -> float:
    return -1.0 if (((n - 2) * (n - 3)) // 2 + 1) % 2 else 1.0


def beta(n: int, constants: Optional[PlanckConstants] = None, published: bool = False) -> float:
    """β = (γ/h)(-1)^{(n-2)(n-3)/2+1}"""
    constants = constants or PlanckConstants()
    factor = published_gamma(n) if published else gamma(n)
    return factor / constants.h * _beta_sign(n)


def coboundary_beta(n: int, constants: Optional[PlanckConstants] = None) -> float:
    """コバウンダリ解の係数: ν̃' = (-1)^{n(n-1)/2+n}/h · K'"""
    if n < 3:
        raise DomainError(f"コバウンダリ解は n ≥ 3 で定義されます: {n}")
    constants = constants or PlanckConstants()
    sign = -1.0 if (n * (n - 1) // 2 + n) % 2 else 1.0
    return sign / constants.h


# ---------------------------------------------------------------------------
# 行列式カーネル
# ---------------------------------------------------------------------------

def _stack_tables(tables: Sequence[PairTable]) -> np.ndarray:
    if not tables:
        raise ArityError("テーブルがありません")
    dim = tables[0].dim
    for table in tables:
        if table.dim != dim:
            raise ShapeError("テーブルの次元が揃っていません")
    return np.stack([t.values for t in tables])


def _reference_determinants(tables: Sequence[PairTable], rank: int) -> List[np.ndarray]:
    """
    基準添字 k ごとの行列式 D_k

    D_k(l) = det[(h_a)_{l_p l_k}]（行 a、列 p≠k を昇順）。全タプル分の配列を返す。
    """
    stacked = _stack_tables(tables)
    if len(tables) != rank - 1:
        raise ArityError(f"rank={rank} には {rank - 1} 個のテーブルが必要です（{len(tables)} 個指定）")
    grid = index_grid(rank, stacked.shape[1])
    determinants = []
    for k in range(rank):
        columns = [p for p in range(rank) if p != k]
        blocks = np.stack(
            [np.stack([stacked[a][grid[p], grid[k]] for p in columns], axis=-1)
             for a in range(len(tables))],
            axis=-2,
        )
        determinants.append(np.linalg.det(blocks))
    return determinants


def kernel(tables: Sequence[PairTable], rank: int) -> np.ndarray:
    """K = Σ_k (-1)^{n-k} D_k（k は 1 始まり）"""
    determinants = _reference_determinants(tables, rank)
    total = np.zeros_like(determinants[0])
    for k, det in enumerate(determinants, start=1):
        total += det if (rank - k) % 2 == 0 else -det
    return total


# ---------------------------------------------------------------------------
# 振動数
# ---------------------------------------------------------------------------

def nu0_array(tables: Sequence[PairTable], beta_value: float) -> np.ndarray:
    """最後の添字を基準とした ν⁰（反対称化しない生の配列）"""
    rank = len(tables) + 1
    return beta_value * _reference_determinants(tables, rank)[-1]


def nu0(tables: Sequence[PairTable], idx: Sequence[int], beta_value: float) -> float:
    """ν⁰_{l_1…l_n} = β det[(E_a)_{l_r l_n}]"""
    rank = len(tables) + 1
    offsets = to_offsets(idx, rank, tables[0].dim)
    block = np.array([[t.values[offsets[r], offsets[-1]] for r in range(rank - 1)] for t in tables])
    return float(beta_value * np.linalg.det(block))


def nu0_bruteforce(tables: Sequence[PairTable], idx: Sequence[int], beta_value: float) -> float:
    """ν⁰ を符号付き置換和で直接評価（行列式経路の独立オラクル）"""
    rank = len(tables) + 1
    offsets = to_offsets(idx, rank, tables[0].dim)
    total = 0.0
    for perm, sign in signed_permutations(rank - 1):
        term = float(sign)
        for r, a in enumerate(perm):
            term *= tables[a].values[offsets[r], offsets[-1]]
        total += term
    return beta_value * total


def nu_cyclic_cochain(tables: Sequence[PairTable], beta_value: float) -> Cochain:
    """巡回的な ν = β Σ_k (-1)^{n-k} D_k"""
    rank = len(tables) + 1
    values = beta_value * kernel(tables, rank)
    debug_log(logger, f"巡回振動数を構築: n={rank}, max|ν|={np.max(np.abs(values)):.3e}", "spectrum")
    return Cochain(rank, tables[0].dim, values)


def nu_cyclic(tables: Sequence[PairTable], idx: Sequence[int], beta_value: float) -> float:
    """巡回的な ν の 1 成分"""
    rank = len(tables) + 1
    offsets = to_offsets(idx, rank, tables[0].dim)
    total = 0.0
    for k in range(rank):
        columns = [p for p in range(rank) if p != k]
        block = np.array([[t.values[offsets[p], offsets[k]] for p in columns] for t in tables])
        det = float(np.linalg.det(block))
        total += det if (rank - (k + 1)) % 2 == 0 else -det
    return beta_value * total


def nu_cyclic_from_nu0(nu0_values: np.ndarray) -> np.ndarray:
    """ν = Σ_p (-1)^{(n-1)p} (ν⁰ を p だけ巡回シフト)"""
    n = nu0_values.ndim
    total = np.zeros_like(nu0_values)
    for p in range(n):
        shifted = cyclic_shift(nu0_values, p)
        total += -shifted if ((n - 1) * p) % 2 else shifted
    return total


def nu_tilde(tables: Sequence[PairTable], constants: Optional[PlanckConstants] = None) -> Cochain:
    """
    コバウンダリ解 ν̃ = δν̃'

    ν̃' は n-2 個のテーブルから作る (n-1) 添字のカーネルに係数を掛けたもの。
    n=3 では ν̃_{lmn} = (2/h){h̃_{nl} + h̃_{lm} + h̃_{mn}}。
    """
    rank = len(tables) + 2
    lower = coboundary_beta(rank, constants) * kernel(tables, rank - 1)
    return coboundary(lower)


def bohr_frequency(e: Sequence[float], m: int, n: int, constants: Optional[PlanckConstants] = None) -> float:
    """ν_{mn} = (E_m - E_n)/h"""
    constants = constants or PlanckConstants()
    e = np.asarray(e, dtype=np.float64)
    i, j = to_offsets((m, n), 2, e.size)
    return float((e[i] - e[j]) / constants.h)


def bohr_cochain(e: Sequence[float], constants: Optional[PlanckConstants] = None) -> Cochain:
    """Bohr 振動数の 2 添字コチェイン"""
    constants = constants or PlanckConstants()
    e = np.asarray(e, dtype=np.float64)
    return Cochain(2, e.size, (e[:, None] - e[None, :]) / constants.h)


# ---------------------------------------------------------------------------
# 対応原理
# ---------------------------------------------------------------------------

def _as_function(expr, symbols) -> Callable:
    return sp.lambdify(symbols, expr, "numpy")


def correspondence_check_n2(energy: sp.Expr, action: sp.Symbol, h: float, level: int,
                            delta: int = 1) -> float:
    """
    n=2 の対応原理: (E(hl) - E(h(l-Δ)))/(hΔ) と dE/dJ (J = hl) の相対誤差

    ヤコビアンが 0 のときは絶対誤差を返す。
    """
    energy_fn = _as_function(energy, action)
    derivative_fn = _as_function(sp.diff(energy, action), action)
    difference = (energy_fn(h * level) - energy_fn(h * (level - delta))) / (h * delta)
    exact = float(derivative_fn(h * level))
    error = abs(difference - exact)
    return float(error / abs(exact)) if exact != 0 else float(error)


def correspondence_check_n3(energies: Sequence[sp.Expr], actions: Sequence[sp.Symbol], h: float,
                            level_l: int, level_m: int, delta_l: int = 1, delta_m: int = 1) -> float:
    """
    n=3 の対応原理: 差分ブラケット [Δ1E1Δ2E2 - Δ1E2Δ2E1]/(h²ΔlΔm) と
    ヤコビアン ∂(E1,E2)/∂(J1,J2)（(hl, hm) で評価）の相対誤差
    """
    if len(energies) != 2 or len(actions) != 2:
        raise ArityError("n=3 の対応原理には 2 個のエネルギー関数と 2 個の作用変数が必要です")
    e1, e2 = (_as_function(expr, list(actions)) for expr in energies)
    j1, j2 = h * level_l, h * level_m
    j1_prev, j2_prev = h * (level_l - delta_l), h * (level_m - delta_m)

    def d1(fn):
        return fn(j1, j2) - fn(j1_prev, j2)

    def d2(fn):
        return fn(j1, j2) - fn(j1, j2_prev)

    bracket = (d1(e1) * d2(e2) - d1(e2) * d2(e1)) / (h * h * delta_l * delta_m)
    jacobian_expr = sp.Matrix(energies).jacobian(list(actions)).det()
    exact = float(_as_function(jacobian_expr, list(actions))(j1, j2))
    error = abs(bracket - exact)
    return float(error / abs(exact)) if exact != 0 else float(error)


def correspondence_check(n: int, energies: Sequence[sp.Expr], actions: Sequence[sp.Symbol], h: float,
                         levels: Sequence[int], deltas: Optional[Sequence[int]] = None) -> float:
    """n=2 / n=3 の対応原理チェックの振り分け（levels は l または (l, m)）"""
    deltas = list(deltas) if deltas is not None else [1] * len(levels)
    if n == 2:
        if len(energies) != 1 or len(actions) != 1 or len(levels) != 1:
            raise ArityError("n=2 の対応原理には 1 個のエネルギー関数・作用変数・準位が必要です")
        return correspondence_check_n2(energies[0], actions[0], h, levels[0], deltas[0])
    if n == 3:
        if len(levels) != 2:
            raise ArityError("n=3 の対応原理には準位 (l, m) が必要です")
        return correspondence_check_n3(energies, actions, h, levels[0], levels[1], deltas[0], deltas[1])
    raise DomainError(f"対応原理のチェックは n=2, 3 のみ対応です: {n}")
