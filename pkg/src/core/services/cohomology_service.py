"""
コホモロジーサービス

反対称化、コバウンダリ作用素 δ、コサイクル判定、一般化 Ritz 則の欠陥を扱う。
"""

import math
from typing import Sequence, Tuple, Union

import numpy as np

from core.models.cochain import Cochain
from utils.index_tools import cyclic_shift, signed_permutations, to_offsets
from utils.log_config import debug_log, get_logger

logger = get_logger(__name__)

CochainLike = Union[Cochain, np.ndarray]


def _values(c: CochainLike) -> np.ndarray:
    return c.values if isinstance(c, Cochain) else np.asarray(c, dtype=np.float64)


def antisymmetrize(raw: CochainLike) -> Cochain:
    """(1/k!) Σ_P sgn(P) raw∘P"""
    values = _values(raw)
    k = values.ndim
    total = np.zeros_like(values)
    for perm, sign in signed_permutations(k):
        total += sign * np.transpose(values, perm)
    return Cochain.from_array(total / math.factorial(k))


def coboundary(c: CochainLike) -> Cochain:
    """(δc)_{l_1…l_{k+1}} = Σ_i (-1)^{i+1} c_{l_1…l̂_i…l_{k+1}}"""
    values = _values(c)
    k = values.ndim
    dim = values.shape[0]
    result = np.zeros((dim,) * (k + 1))
    for i in range(k + 1):
        term = np.expand_dims(values, axis=i)
        if i % 2:
            result -= term
        else:
            result += term
    return Cochain(k + 1, dim, result)


def is_cocycle(c: CochainLike, tol: float) -> Tuple[bool, float]:
    """max|δc| ≤ tol·scale ならコサイクル"""
    cochain = c if isinstance(c, Cochain) else Cochain.from_array(c)
    defect = float(np.max(np.abs(coboundary(cochain).values)))
    debug_log(logger, f"コサイクル判定: arity={cochain.arity}, defect={defect:.3e}", "spectrum")
    return defect <= tol * cochain.scale, defect


def ritz_defect(nu: CochainLike, idx: Sequence[int], k: int) -> float:
    """|ν_{l_1…l_n} - Σ_i ν(l_i を k に置換)|"""
    values = _values(nu)
    n, dim = values.ndim, values.shape[0]
    offsets = list(to_offsets(idx, n, dim))
    spare = to_offsets([k], 1, dim)[0]
    total = 0.0
    for i in range(n):
        replaced = list(offsets)
        replaced[i] = spare
        total += values[tuple(replaced)]
    return float(abs(values[tuple(offsets)] - total))


def ritz_defect_array(nu: CochainLike) -> np.ndarray:
    """全タプル・全予備添字についての Ritz 欠陥（最後の軸が予備添字）"""
    values = _values(nu)
    n, dim = values.ndim, values.shape[0]
    defects = np.empty((dim,) * (n + 1))
    for spare in range(dim):
        replaced = np.zeros_like(values)
        for i in range(n):
            replaced = replaced + np.expand_dims(np.take(values, spare, axis=i), axis=i)
        defects[..., spare] = np.abs(values - replaced)
    return defects


def max_ritz_defect(nu: CochainLike) -> float:
    """全タプル・全予備添字での Ritz 欠陥の最大値（反対称なら max|δν| と一致）"""
    return float(np.max(ritz_defect_array(nu)))


def cyclic_defect(nu: CochainLike, p: int = 1) -> float:
    """max|ν を p だけ巡回シフト - (-1)^{(n-1)p} ν|"""
    values = _values(nu)
    n = values.ndim
    sign = -1.0 if ((n - 1) * p) % 2 else 1.0
    return float(np.max(np.abs(cyclic_shift(values, p) - sign * values)))
