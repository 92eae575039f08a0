"""
入力ファイル読み込み

spectrum 入力（InputSpec）と nambu システムファイルを読み込み、
モデルに変換する。検証エラーは問題のフィールド名を含む InputSpecError にする。
"""

import json
from pathlib import Path
from typing import List, Tuple, Type, TypeVar, Union

from pydantic import BaseModel, ValidationError

from core.models.input_models import InputSpec, NambuSystemFile
from core.models.physics_models import HamiltonianBranch, HamiltonianSet, NambuSystem, PairTable, PlanckConstants
from core.services.dynamics_service import build_coboundary_set, build_hamiltonian_set
from core.services.nambu_service import build_polynomial_system
from core.services.spectrum_service import pairtable_from_potential
from utils.errors import InputSpecError, StorageError
from utils.log_config import get_logger

logger = get_logger(__name__)

ModelT = TypeVar("ModelT", bound=BaseModel)


def _read_json(path: Union[str, Path]) -> dict:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        logger.error(f"❌ 入力ファイル読み込みエラー: {path}: {e}")
        raise StorageError(f"入力ファイルを読み込めません: {path}", {"path": str(path), "reason": str(e)})
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputSpecError(f"JSON の構文エラー: {path} ({e.msg}, 行 {e.lineno})", field="<json>")
    if not isinstance(data, dict):
        raise InputSpecError(f"入力ファイルの最上位はオブジェクトである必要があります: {path}", field="<root>")
    return data


def _validate(model: Type[ModelT], data: dict, path: Union[str, Path]) -> ModelT:
    try:
        return model.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        origin = first.get("ctx", {}).get("error")
        field = getattr(origin, "field", None) or ".".join(str(part) for part in first.get("loc", ())) or "<root>"
        message = first.get("msg", "入力が不正です")
        logger.error(f"❌ 入力検証エラー: {path}: {field}: {message}")
        raise InputSpecError(f"入力が不正です: {message}", field=field,
                             details={"path": str(path), "errors": len(e.errors())})


def load_input_spec(path: Union[str, Path]) -> InputSpec:
    """spectrum 入力ファイルを読み込む"""
    spec = _validate(InputSpec, _read_json(path), path)
    logger.info(f"✅ 入力読み込み完了: n={spec.n}, N={spec.dim}, branch={spec.branch}")
    return spec


def tables_from_spec(spec: InputSpec) -> List[PairTable]:
    """各ハミルトニアンのペアテーブル（ポテンシャル指定は差分テーブルに変換）"""
    tables = []
    for entry in spec.hamiltonians:
        if entry.potential is not None:
            tables.append(pairtable_from_potential(entry.potential))
        else:
            tables.append(PairTable(entry.pair_table))
    return tables


def hamiltonians_from_spec(spec: InputSpec) -> Tuple[HamiltonianSet, List[PairTable]]:
    """入力からハミルトニアン組を構築"""
    constants = PlanckConstants(spec.hbar)
    tables = tables_from_spec(spec)
    if spec.branch == HamiltonianBranch.COBOUNDARY:
        return build_coboundary_set(tables, constants), tables
    return build_hamiltonian_set(tables, constants, rank=spec.n), tables


def load_nambu_system(path: Union[str, Path]) -> NambuSystem:
    """nambu システムファイルを読み込む"""
    system_file = _validate(NambuSystemFile, _read_json(path), path)
    try:
        system = build_polynomial_system(
            system_file.hamiltonians, system_file.dim, name=system_file.name,
            fd_step_scale=system_file.fd_step_scale,
            exact_derivatives=system_file.exact_derivatives,
        )
    except Exception as e:
        # sympy の構文エラーや未知の変数
        raise InputSpecError(f"ハミルトニアンの式を解釈できません: {e}", field="hamiltonians",
                             details={"path": str(path)})
    logger.info(f"✅ Nambu 系読み込み完了: {system.name} (dim={system.dim})")
    return system
