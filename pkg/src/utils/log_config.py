"""
ログ設定モジュール

settings.ini の [logging] / [debug] を読み込み、検証CLIとライブラリ全体のログを設定します。
標準出力は JSON レポート専用のため、コンソールログは標準エラー出力に出します。
"""

import configparser
import logging
import logging.handlers
import sys
from pathlib import Path
from typing import Dict, Optional

PROJECT_ROOT = Path(__file__).resolve().parent.parent.parent  # src/utils/log_config.py -> project_root

# debug_log のカテゴリ（settings.ini の <category>_debug に対応）
DEBUG_CATEGORIES = ("algebra", "spectrum", "dynamics", "nambu", "cli")

_FORMATS = {
    "simple": "%(asctime)s - %(levelname)s - %(name)s - %(message)s",
    "detailed": "%(asctime)s - %(name)s - %(levelname)s - %(filename)s:%(lineno)d - %(funcName)s() - %(message)s",
}

_DEFAULTS: Dict[str, Dict[str, str]] = {
    "logging": {
        "log_level": "INFO",
        "enable_file_logging": "false",
        "log_file_path": "logs/gmm.log",
        "max_log_file_size": "10",
        "log_backup_count": "5",
        "enable_console_logging": "true",
        "detailed_logging": "false",
    },
    "debug": {"debug_mode": "false", **{f"{c}_debug": "false" for c in DEBUG_CATEGORIES}},
}


class LogConfig:
    """ログ設定クラス"""

    def __init__(self, config_path: Optional[str] = None):
        """
        Args:
            config_path: 設定ファイルのパス（未指定で config/settings.ini）
        """
        self.config_path = Path(config_path) if config_path else PROJECT_ROOT / "config" / "settings.ini"
        self.config = configparser.ConfigParser()
        self.config.read_dict(_DEFAULTS)
        self._load_config()
        self._setup_logging()

    def _load_config(self):
        """設定ファイルで既定値を上書き（読めなければ既定値のまま）"""
        if not self.config_path.exists():
            return
        try:
            self.config.read(self.config_path, encoding="utf-8")
        except configparser.Error as e:
            print(f"設定ファイル読み込みエラー: {e}", file=sys.stderr)

    def _formatter(self) -> logging.Formatter:
        style = "detailed" if self.config.getboolean("logging", "detailed_logging") else "simple"
        return logging.Formatter(_FORMATS[style], datefmt="%Y-%m-%d %H:%M:%S")

    def _file_handler(self) -> Optional[logging.Handler]:
        """ローテーション付きファイルハンドラー（作成できなければ None）"""
        path = Path(self.config.get("logging", "log_file_path"))
        if not path.is_absolute():
            path = PROJECT_ROOT / path
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            return logging.handlers.RotatingFileHandler(
                path,
                maxBytes=self.config.getint("logging", "max_log_file_size") * 1024 * 1024,
                backupCount=self.config.getint("logging", "log_backup_count"),
                encoding="utf-8",
            )
        except OSError as e:
            # 読み取り専用環境ではコンソールのみ
            print(f"ログファイルを開けません: {e}", file=sys.stderr)
            return None

    def _setup_logging(self):
        """ルートロガーのハンドラーを張り替える"""
        level_name = self.config.get("logging", "log_level").upper()
        root_logger = logging.getLogger()
        root_logger.setLevel(getattr(logging, level_name, logging.INFO))
        for handler in root_logger.handlers[:]:
            root_logger.removeHandler(handler)

        handlers = []
        if self.config.getboolean("logging", "enable_console_logging"):
            handlers.append(logging.StreamHandler(sys.stderr))
        if self.config.getboolean("logging", "enable_file_logging"):
            handlers.append(self._file_handler())

        formatter = self._formatter()
        for handler in filter(None, handlers):
            handler.setFormatter(formatter)
            root_logger.addHandler(handler)

    def is_debug_enabled(self, category: str) -> bool:
        """debug_mode または カテゴリ別フラグ"""
        if self.config.getboolean("debug", "debug_mode"):
            return True
        return self.config.getboolean("debug", f"{category}_debug", fallback=False)


_log_config: Optional[LogConfig] = None


def get_log_config() -> LogConfig:
    """ログ設定のシングルトンインスタンスを取得"""
    global _log_config
    if _log_config is None:
        _log_config = LogConfig()
    return _log_config


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """ロガーを取得（初回呼び出しでログ設定を初期化）"""
    get_log_config()
    return logging.getLogger(name)


def setup_logging(config_path: Optional[str] = None):
    """ログ設定を初期化し直す"""
    global _log_config
    _log_config = LogConfig(config_path)


def debug_log(logger: logging.Logger, message: str, category: str = "general"):
    """カテゴリ別に有効化されたデバッグログ"""
    if get_log_config().is_debug_enabled(category):
        logger.debug(f"[{category.upper()}] {message}")
