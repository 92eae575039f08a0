"""
力学サービス

一般化 Heisenberg 方程式による時間発展、運動方程式の残差、固有値関係、
ハミルトニアンのシフト対称性、条件付き基本恒等式、n=3 の無限小変換を扱う。
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from core.models.cochain import Cochain
from core.models.generalized_matrix import GeneralizedMatrix, new_zero
from core.models.physics_models import (
    EvolvingVariable,
    HamiltonianBranch,
    HamiltonianSet,
    PairTable,
    PlanckConstants,
)
from core.services.algebra_service import (
    NormalSpec,
    identity_matrix,
    identity_table,
    nfold_commutator,
    nfold_product,
    normal_cubic_matrix,
    normal_matrix,
    reordering_sign,
)
from core.services.cohomology_service import coboundary
from core.services.spectrum_service import beta, bohr_cochain, nu_cyclic_cochain, nu_tilde
from utils.errors import DomainError, ShapeError
from utils.index_tools import distinct_mask, single_pair_mask
from utils.log_config import debug_log, get_logger

logger = get_logger(__name__)


# ---------------------------------------------------------------------------
# ハミルトニアン組
# ---------------------------------------------------------------------------

def build_hamiltonian_set(tables: Sequence[PairTable], constants: Optional[PlanckConstants] = None,
                          rank: Optional[int] = None) -> HamiltonianSet:
    """
    正規形ハミルトニアン組（n ≥ 3）または n=2 の対角ハミルトニアン

    n=2 の正規形は恒等的に 0 なので、エネルギー準位の対角行列を使う。
    """
    constants = constants or PlanckConstants()
    tables = list(tables)
    rank = rank or len(tables) + 1
    dim = tables[0].dim
    if rank == 2:
        table = tables[0]
        if table.potential is None:
            raise DomainError("n=2 のハミルトニアンにはエネルギー準位 (potential) が必要です")
        matrix = GeneralizedMatrix(2, dim, np.diag(table.potential).astype(np.complex128))
        return HamiltonianSet(2, dim, [matrix], [table], constants, HamiltonianBranch.BOHR)

    matrices = [normal_matrix(NormalSpec(rank, dim, table)) for table in tables]
    debug_log(logger, f"ハミルトニアン組を構築: n={rank}, N={dim}", "dynamics")
    return HamiltonianSet(rank, dim, matrices, tables, constants, HamiltonianBranch.COCYCLE)


def build_coboundary_set(tilde_tables: Sequence[PairTable],
                         constants: Optional[PlanckConstants] = None) -> HamiltonianSet:
    """n-2 個の正規形 H_a と H_{n-1} = I からなる組"""
    constants = constants or PlanckConstants()
    tilde_tables = list(tilde_tables)
    rank = len(tilde_tables) + 2
    dim = tilde_tables[0].dim
    matrices = [normal_matrix(NormalSpec(rank, dim, table)) for table in tilde_tables]
    matrices.append(identity_matrix(rank, dim))
    tables = tilde_tables + [identity_table(rank, dim)]
    return HamiltonianSet(rank, dim, matrices, tables, constants, HamiltonianBranch.COBOUNDARY)


def frequencies_for(hamiltonians: HamiltonianSet) -> Cochain:
    """組の種類に応じた振動数コチェイン"""
    if hamiltonians.branch == HamiltonianBranch.BOHR:
        return bohr_cochain(hamiltonians.tables[0].potential, hamiltonians.constants)
    if hamiltonians.branch == HamiltonianBranch.COBOUNDARY:
        return nu_tilde(hamiltonians.tables[:-1], hamiltonians.constants)
    return nu_cyclic_cochain(hamiltonians.tables, beta(hamiltonians.rank, hamiltonians.constants))


# ---------------------------------------------------------------------------
# 時間発展
# ---------------------------------------------------------------------------

def evolve(variable: EvolvingVariable, t: float) -> GeneralizedMatrix:
    """A(t) = A(0)·exp(2πiνt)"""
    phase = np.exp(2j * np.pi * variable.frequencies.values * t)
    return variable.initial.hadamard(phase)


def heisenberg_rhs(a: GeneralizedMatrix, hamiltonians: HamiltonianSet) -> GeneralizedMatrix:
    """(1/iħ)[A, H_1, …, H_{n-1}]"""
    if (a.rank, a.dim) != (hamiltonians.rank, hamiltonians.dim):
        raise ShapeError("変数とハミルトニアンの形状が一致しません")
    commutator = nfold_commutator([a] + list(hamiltonians.matrices))
    return commutator * (1.0 / (1j * hamiltonians.constants.hbar))


def reordered_rhs(a: GeneralizedMatrix, hamiltonians: HamiltonianSet) -> GeneralizedMatrix:
    """ハミルトニアンを (H_{n-2}, …, H_1, H_{n-1}) の順に並べた右辺"""
    if hamiltonians.rank < 3:
        raise DomainError("並べ替えた方程式は n ≥ 3 で定義されます")
    matrices = list(hamiltonians.matrices)
    reordered = matrices[:-1][::-1] + matrices[-1:]
    commutator = nfold_commutator([a] + reordered)
    return commutator * (1.0 / (1j * hamiltonians.constants.hbar))


def residual_scale(hamiltonians: HamiltonianSet, a: GeneralizedMatrix) -> float:
    """残差の許容スケール Π max|h_a| · N · max|A| / ħ（下限 1）"""
    amplitude = float(np.max(np.abs(a.data))) if a.data.size else 0.0
    scale = hamiltonians.table_scale * hamiltonians.dim * amplitude / hamiltonians.constants.hbar
    return max(scale, 1.0)


def eom_residual(variable: EvolvingVariable, hamiltonians: HamiltonianSet, t: float,
                 distinct_only: bool = False) -> float:
    """
    max|2πiν∘A(t) - (1/iħ)[A(t), H…]|

    distinct_only=True のときは全相異成分だけで評価する。
    """
    a_t = evolve(variable, t)
    lhs = a_t.hadamard(2j * np.pi * variable.frequencies.values)
    rhs = heisenberg_rhs(a_t, hamiltonians)
    difference = np.abs(lhs.data - rhs.data)
    if distinct_only:
        mask = distinct_mask(hamiltonians.rank, hamiltonians.dim)
        return float(np.max(difference[mask])) if mask.any() else 0.0
    return float(np.max(difference))


def finite_difference_defect(variable: EvolvingVariable, hamiltonians: HamiltonianSet, t: float,
                             relative_step: float = 1e-6) -> float:
    """
    (A(t+δ) - A(t-δ))/2δ と右辺の相対誤差（δ = relative_step × 特性周期）

    基準値は max|右辺| と residual_scale の大きい方。ν ≡ 0（N < n など）では
    右辺が丸め誤差だけになるため、絶対スケールで割る。
    """
    max_frequency = float(np.max(np.abs(variable.frequencies.values)))
    step = relative_step / max(max_frequency, 1.0)
    a_t = evolve(variable, t)
    derivative = (evolve(variable, t + step).data - evolve(variable, t - step).data) / (2 * step)
    rhs = heisenberg_rhs(a_t, hamiltonians).data
    reference = max(float(np.max(np.abs(rhs))), residual_scale(hamiltonians, a_t))
    return float(np.max(np.abs(derivative - rhs)) / reference)


# ---------------------------------------------------------------------------
# 固有値関係
# ---------------------------------------------------------------------------

def commutator_eigenvalue(hamiltonians: HamiltonianSet, idx: Sequence[int]) -> float:
    """プローブ行列（idx にだけ 1）で読み取る交換子の乗数 [P, H…]_idx"""
    probe = new_zero(hamiltonians.rank, hamiltonians.dim)
    probe.set(idx, 1.0)
    return float(nfold_commutator([probe] + list(hamiltonians.matrices)).get(idx).real)


def eigenvalue_cochain_of(generators: Sequence[GeneralizedMatrix]) -> Cochain:
    """全相異タプルに一様な 1 を置いたプローブで、全成分の乗数 f を一度に得る"""
    rank, dim = generators[0].rank, generators[0].dim
    mask = distinct_mask(rank, dim)
    probe = GeneralizedMatrix(rank, dim, mask.astype(np.complex128))
    commutator = nfold_commutator([probe] + list(generators))
    return Cochain(rank, dim, np.where(mask, commutator.data.real, 0.0))


def eigenvalue_cochain(hamiltonians: HamiltonianSet) -> Cochain:
    """ハミルトニアン組の固有値コチェイン f（f = -hν）"""
    return eigenvalue_cochain_of(hamiltonians.matrices)


# ---------------------------------------------------------------------------
# シフト対称性・単位元の挿入
# ---------------------------------------------------------------------------

def shift_hamiltonians(hamiltonians: HamiltonianSet, shifts: Sequence[float]) -> HamiltonianSet:
    """
    h → h + c_a（非対角成分のみ）で組を作り直す

    正規形の値は (n-2)c_a だけずれ、H'_a = H_a + (n-2)c_a I となる。
    シフト後のテーブルは反対称ではない。
    """
    shifts = np.asarray(shifts, dtype=np.float64)
    if hamiltonians.rank < 3:
        raise DomainError("シフト対称性は n ≥ 3 で定義されます")
    if shifts.size != len(hamiltonians.tables):
        raise ShapeError(f"シフト量は {len(hamiltonians.tables)} 個必要です")
    off_diagonal = 1.0 - np.eye(hamiltonians.dim)
    tables, matrices = [], []
    for table, shift in zip(hamiltonians.tables, shifts):
        shifted = PairTable(table.values + shift * off_diagonal)
        tables.append(shifted)
        matrices.append(normal_matrix(NormalSpec(hamiltonians.rank, hamiltonians.dim, shifted,
                                                 require_antisymmetric=False)))
    return HamiltonianSet(hamiltonians.rank, hamiltonians.dim, matrices, tables,
                          hamiltonians.constants, hamiltonians.branch, shift=shifts)


def identity_insertion_defect(a: GeneralizedMatrix, hamiltonians: HamiltonianSet, k: int) -> float:
    """[A, H_1…H_k, I, …, I] の全相異成分の最大値（k = 0 … n-2）"""
    rank = hamiltonians.rank
    if not 0 <= k <= rank - 2:
        raise DomainError(f"k は 0..{rank - 2} の範囲です: {k}")
    identity = identity_matrix(rank, hamiltonians.dim)
    args = [a] + list(hamiltonians.matrices[:k]) + [identity] * (rank - 1 - k)
    mask = distinct_mask(rank, hamiltonians.dim)
    if not mask.any():
        return 0.0
    return float(np.max(np.abs(nfold_commutator(args).data[mask])))


# ---------------------------------------------------------------------------
# 基本恒等式・導分則・積の閉包
# ---------------------------------------------------------------------------

@dataclass
class FundamentalIdentityResult:
    """基本恒等式と導分則の欠陥（相対値）と生成子の固有値コサイクル欠陥"""
    fundamental_identity: float
    derivation_rule: float
    eigen_cocycle_defect: float


def _relative(lhs: np.ndarray, rhs: np.ndarray) -> float:
    scale = max(float(np.max(np.abs(lhs))), float(np.max(np.abs(rhs))), 1.0)
    return float(np.max(np.abs(lhs - rhs)) / scale)


def fundamental_identity_defect(a_list: Sequence[GeneralizedMatrix],
                                b_list: Sequence[GeneralizedMatrix]) -> FundamentalIdentityResult:
    """
    [[A_1…A_n], B…] = Σ_i [A_1, …, [A_i, B…], …, A_n] と
    [(A_1…A_n), B…] = Σ_i (A_1 … [A_i, B…] … A_n) の欠陥
    """
    a_list, b_list = list(a_list), list(b_list)
    if len(a_list) != a_list[0].rank or len(b_list) != a_list[0].rank - 1:
        raise ShapeError("A は n 個、B は n-1 個必要です")

    acted = [nfold_commutator([a] + b_list) for a in a_list]

    lhs = nfold_commutator([nfold_commutator(a_list)] + b_list).data
    rhs = sum(nfold_commutator(a_list[:i] + [acted[i]] + a_list[i + 1:]).data
              for i in range(len(a_list)))

    lhs_product = nfold_commutator([nfold_product(a_list)] + b_list).data
    rhs_product = sum(nfold_product(a_list[:i] + [acted[i]] + a_list[i + 1:]).data
                      for i in range(len(a_list)))

    eigen = eigenvalue_cochain_of(b_list)
    cocycle_defect = float(np.max(np.abs(coboundary(eigen).values)))
    return FundamentalIdentityResult(
        fundamental_identity=_relative(lhs, rhs),
        derivation_rule=_relative(lhs_product, rhs_product),
        eigen_cocycle_defect=cocycle_defect,
    )


def product_closure_defect(a_list: Sequence[GeneralizedMatrix], frequencies: Cochain, t: float) -> float:
    """n 個の発展変数の積が A(0)e^{2πiνt} の形を保つかの欠陥（Ritz 則が成り立てば 0）"""
    evolved = [evolve(EvolvingVariable(a, frequencies), t) for a in a_list]
    product_t = nfold_product(evolved)
    expected = evolve(EvolvingVariable(nfold_product(list(a_list)), frequencies), t)
    return _relative(product_t.data, expected.data)


# ---------------------------------------------------------------------------
# n=3 の無限小変換
# ---------------------------------------------------------------------------

def tilde_gg(g1: PairTable, g2: PairTable) -> np.ndarray:
    """(G_1G_2)~ の 6 項の乗数"""
    a, b = g1.values, g2.values
    return (
        np.einsum("ln,mn->lmn", a, b) - np.einsum("ln,mn->lmn", b, a)
        + np.einsum("ml,nl->lmn", a, b) - np.einsum("ml,nl->lmn", b, a)
        + np.einsum("nm,lm->lmn", a, b) - np.einsum("nm,lm->lmn", b, a)
    )


@dataclass
class InfinitesimalTransformResult:
    """無限小変換の結果と乗数形との差"""
    transformed: GeneralizedMatrix
    multiplier: np.ndarray
    multiplier_defect: float


def infinitesimal_transform(a: GeneralizedMatrix, g1: PairTable, g2: PairTable, epsilon: float,
                            require_antisymmetric: bool = True) -> InfinitesimalTransformResult:
    """
    A' = A + ε[A, G_1, G_2]（n=3 のみ）

    全相異成分で [A, G_1, G_2] = (G_1G_2)~ ∘ A を確認する。
    """
    if a.rank != 3:
        raise DomainError(f"無限小変換は n=3 のみ対応です: rank={a.rank}")
    generator_1 = normal_cubic_matrix(g1, require_antisymmetric)
    generator_2 = normal_cubic_matrix(g2, require_antisymmetric)
    commutator = nfold_commutator([a, generator_1, generator_2])
    multiplier = tilde_gg(g1, g2)
    mask = distinct_mask(3, a.dim)
    defect = 0.0
    if mask.any():
        defect = float(np.max(np.abs(commutator.data[mask] - (multiplier * a.data)[mask])))
    return InfinitesimalTransformResult(
        transformed=a + commutator * epsilon,
        multiplier=multiplier,
        multiplier_defect=defect,
    )


# ---------------------------------------------------------------------------
# 乱数で作る検証用の変数
# ---------------------------------------------------------------------------

def random_antisymmetric_table(dim: int, rng: np.random.Generator) -> PairTable:
    """組合せ則を満たさない一般の反対称テーブル"""
    raw = rng.normal(size=(dim, dim))
    return PairTable(raw - raw.T)


def random_potential_table(dim: int, rng: np.random.Generator) -> PairTable:
    """乱数ポテンシャルから作る組合せ則テーブル"""
    potential = rng.normal(size=dim)
    return PairTable(potential[:, None] - potential[None, :], True, potential)


def random_matrix(rank: int, dim: int, rng: np.random.Generator) -> GeneralizedMatrix:
    """全成分が乱数の複素一般化行列"""
    shape = (dim,) * rank
    return GeneralizedMatrix(rank, dim, rng.normal(size=shape) + 1j * rng.normal(size=shape))


def dynamical_variable(rank: int, dim: int, rng: np.random.Generator) -> GeneralizedMatrix:
    """
    全相異成分は乱数、添字が重なる成分は正規形（反対称テーブル）の変数

    単位元を生成子に含む組では、重なる成分が正規形のときに限り交換子が 0 になる。
    """
    mask = distinct_mask(rank, dim)
    shape = (dim,) * rank
    data = np.where(mask, rng.normal(size=shape) + 1j * rng.normal(size=shape), 0.0)
    stationary = normal_matrix(NormalSpec(rank, dim, random_antisymmetric_table(dim, rng)))
    return GeneralizedMatrix(rank, dim, data + stationary.data)


def repeated_index_rhs(a: GeneralizedMatrix, hamiltonians: HamiltonianSet) -> float:
    """添字が重なる成分での右辺の最大値（定常性の確認）"""
    mask = ~distinct_mask(hamiltonians.rank, hamiltonians.dim)
    return float(np.max(np.abs(heisenberg_rhs(a, hamiltonians).data[mask])))


def normal_form_defect(c: GeneralizedMatrix) -> float:
    """一組一致タプル以外の成分の最大値（正規形の形をしているか）"""
    mask = ~single_pair_mask(c.rank, c.dim)
    return float(np.max(np.abs(c.data[mask]))) if mask.any() else 0.0


def reordering_defect(a: GeneralizedMatrix, hamiltonians: HamiltonianSet) -> float:
    """reordered_rhs = (-1)^{(n-2)(n-3)/2} heisenberg_rhs の欠陥"""
    sign = reordering_sign(hamiltonians.rank)
    return float(np.max(np.abs(reordered_rhs(a, hamiltonians).data
                               - sign * heisenberg_rhs(a, hamiltonians).data)))


def eom_residual_sweep(variable: EvolvingVariable, hamiltonians: HamiltonianSet,
                       times: Sequence[float]) -> List[float]:
    """複数時刻での残差"""
    return [eom_residual(variable, hamiltonians, t) for t in times]
