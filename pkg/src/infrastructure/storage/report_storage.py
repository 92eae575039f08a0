"""
一般化行列力学システム - レポート保存ヘルパー

検証レポート・スペクトル・振動子レポートの JSON 保存と、Nambu 軌道の CSV 保存を提供します。
JSON はキー順・インデント固定で書き出すため、同じ入力からは同じバイト列になります。
"""

import json
import math
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np

from core.models.physics_models import Trajectory
from core.models.report_models import VerificationReport
from utils.errors import StorageError
from utils.log_config import get_logger

logger = get_logger(__name__)

PathLike = Union[str, Path]


def _to_builtin(value: Any) -> Any:
    """numpy 型・非有限値を JSON で表せる値に変換"""
    if isinstance(value, dict):
        return {str(k): _to_builtin(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_builtin(v) for v in value]
    if isinstance(value, np.ndarray):
        return _to_builtin(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, complex):
        return {"real": value.real, "imag": value.imag}
    return value


def dumps_report(payload: Dict[str, Any]) -> str:
    """決定的な JSON 文字列（キー順、インデント 2、末尾改行）"""
    return json.dumps(_to_builtin(payload), sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


class ReportStorageManager:
    """レポート保存管理クラス"""

    def __init__(self, base_dir: Optional[PathLike] = None):
        """
        Args:
            base_dir: 相対パスの基準ディレクトリ（未指定でカレントディレクトリ）
        """
        self.base_dir = Path(base_dir) if base_dir else None
        logger.info("ReportStorageManager initialized.")

    def _resolve(self, path: PathLike) -> Path:
        path = Path(path)
        if self.base_dir is not None and not path.is_absolute():
            path = self.base_dir / path
        return path

    def save_json(self, payload: Dict[str, Any], path: PathLike) -> Path:
        """JSON を保存（親ディレクトリは自動作成）"""
        target = self._resolve(path)
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(dumps_report(payload), encoding="utf-8")
            logger.info(f"✅ JSON 保存完了: {target}")
            return target
        except OSError as e:
            logger.error(f"❌ JSON 保存エラー: {target}: {e}")
            raise StorageError(f"ファイルを書き込めません: {target}", {"path": str(target), "reason": str(e)})

    def save_report(self, report: VerificationReport, path: PathLike) -> Path:
        """検証レポートを保存"""
        return self.save_json(report.to_dict(), path)

    def save_trajectory(self, trajectory: Trajectory, path: PathLike) -> Path:
        """軌道 CSV（ヘッダ t,x1,..,xn,H1,..,H(n-1)）を保存"""
        target = self._resolve(path)
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            trajectory.to_frame().to_csv(target, index=False, float_format="%.17g")
            logger.info(f"✅ 軌道 CSV 保存完了: {target} ({len(trajectory.times)} 行)")
            return target
        except OSError as e:
            logger.error(f"❌ 軌道 CSV 保存エラー: {target}: {e}")
            raise StorageError(f"ファイルを書き込めません: {target}", {"path": str(target), "reason": str(e)})

    def load_json(self, path: PathLike) -> Dict[str, Any]:
        """JSON を読み込む"""
        target = self._resolve(path)
        try:
            return json.loads(target.read_text(encoding="utf-8"))
        except OSError as e:
            logger.error(f"❌ JSON 読み込みエラー: {target}: {e}")
            raise StorageError(f"ファイルを読み込めません: {target}", {"path": str(target), "reason": str(e)})
