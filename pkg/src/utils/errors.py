"""
統一エラー定義

エラーカテゴリ・レベル・CLI終了コードの対応を一元管理する。
docs/10_エラーハンドリング統一仕様.md の分類に従う。
"""

from typing import Any, Dict, Optional


class ErrorCategory:
    """エラーカテゴリの定義"""
    INPUT_ERROR = "INPUT_ERROR"              # 入力・引数の不備
    COMPUTATION_ERROR = "COMPUTATION_ERROR"  # 形状・定義域の不整合
    IO_ERROR = "IO_ERROR"                    # ファイル入出力
    DIVERGENCE_ERROR = "DIVERGENCE_ERROR"    # 数値積分の発散


class ErrorLevel:
    """エラーレベルの定義"""
    CRITICAL = "CRITICAL"
    ERROR = "ERROR"
    WARNING = "WARNING"
    INFO = "INFO"


class ExitCode:
    """CLI終了コード"""
    SUCCESS = 0
    CHECK_FAILED = 1
    USAGE_ERROR = 2
    IO_ERROR = 3
    DIVERGENCE = 4


_CATEGORY_EXIT_CODES = {
    ErrorCategory.INPUT_ERROR: ExitCode.USAGE_ERROR,
    ErrorCategory.COMPUTATION_ERROR: ExitCode.USAGE_ERROR,
    ErrorCategory.IO_ERROR: ExitCode.IO_ERROR,
    ErrorCategory.DIVERGENCE_ERROR: ExitCode.DIVERGENCE,
}


class MatrixMechanicsError(Exception):
    """全エラーの基底クラス"""

    code = "GMM-000"
    category = ErrorCategory.COMPUTATION_ERROR
    level = ErrorLevel.ERROR

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    @property
    def exit_code(self) -> int:
        return _CATEGORY_EXIT_CODES.get(self.category, ExitCode.CHECK_FAILED)

    def to_dict(self) -> Dict[str, Any]:
        """標準エラーオブジェクトに変換"""
        return {
            "code": self.code,
            "category": self.category,
            "level": self.level,
            "message": self.message,
            "details": self.details,
        }


class ShapeError(MatrixMechanicsError):
    """階数・次元の不一致"""
    code = "GMM-101"


class ArityError(ShapeError):
    """引数の個数が階数と合わない"""
    code = "GMM-102"


class IndexRangeError(MatrixMechanicsError, IndexError):
    """添字が 1..N の範囲外"""
    code = "GMM-103"


class TableValidationError(MatrixMechanicsError, ValueError):
    """ペアテーブルの反対称性などの検証エラー"""
    code = "GMM-104"
    category = ErrorCategory.INPUT_ERROR


class DomainError(MatrixMechanicsError, ValueError):
    """定義域外のパラメータ（n < 3 の β、ω ≤ 0 など）"""
    code = "GMM-105"


class InputSpecError(MatrixMechanicsError):
    """入力ファイルの不備（問題のフィールド名を含む）"""
    code = "GMM-201"
    category = ErrorCategory.INPUT_ERROR

    def __init__(self, message: str, field: Optional[str] = None,
                 details: Optional[Dict[str, Any]] = None):
        details = dict(details or {})
        if field:
            details["field"] = field
            message = f"{field}: {message}"
        super().__init__(message, details)
        self.field = field


class StorageError(MatrixMechanicsError):
    """ファイル入出力の失敗"""
    code = "GMM-301"
    category = ErrorCategory.IO_ERROR
    level = ErrorLevel.CRITICAL


class DivergenceError(MatrixMechanicsError):
    """積分の発散（途中までの軌道を保持）"""
    code = "GMM-401"
    category = ErrorCategory.DIVERGENCE_ERROR

    def __init__(self, message: str, partial=None, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, details)
        self.partial = partial
