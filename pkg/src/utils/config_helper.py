"""
設定ファイル管理ヘルパー
config/settings.ini と .env から許容誤差・物理定数・積分パラメータ・ワーカー数を読み込む
"""
import configparser
import os
from pathlib import Path
from typing import Callable, Optional, TypeVar

from dotenv import load_dotenv

from utils.log_config import PROJECT_ROOT, get_logger

logger = get_logger(__name__)

# .env の GMM_THREADS などを環境変数へ反映（既存の環境変数は上書きしない）
load_dotenv(PROJECT_ROOT / ".env", override=False)

ValueT = TypeVar("ValueT")


class ConfigHelper:
    """設定ファイル管理クラス"""

    def __init__(self, config_file: Optional[str] = None):
        self.config = configparser.ConfigParser()
        self.config_file = Path(config_file) if config_file else PROJECT_ROOT / "config" / "settings.ini"

        if self.config_file.exists():
            self.config.read(self.config_file, encoding='utf-8')
            logger.debug(f"設定ファイルを読み込みました: {self.config_file}")
        else:
            logger.warning(f"⚠️ 設定ファイルが見つかりません（既定値を使用）: {self.config_file}")

    def _lookup(self, section: str, key: str, default: ValueT,
                read: Callable[[str, str], ValueT]) -> ValueT:
        try:
            return read(section, key)
        except (configparser.NoSectionError, configparser.NoOptionError, ValueError):
            logger.debug(f"設定値なし: [{section}] {key} -> 既定値 {default}")
            return default

    def get_str(self, section: str, key: str, default: str = "") -> str:
        return self._lookup(section, key, default, self.config.get)

    def get_int(self, section: str, key: str, default: int = 0) -> int:
        return self._lookup(section, key, default, self.config.getint)

    def get_float(self, section: str, key: str, default: float = 0.0) -> float:
        return self._lookup(section, key, default, self.config.getfloat)

    def get_bool(self, section: str, key: str, default: bool = False) -> bool:
        return self._lookup(section, key, default, self.config.getboolean)


# グローバル設定インスタンス
_config_helper = None


def get_config() -> ConfigHelper:
    """設定ヘルパーのシングルトンインスタンスを取得"""
    global _config_helper
    if _config_helper is None:
        _config_helper = ConfigHelper()
    return _config_helper


# 許容誤差の既定値（settings.ini に無い場合）
_DEFAULT_TOLERANCES = {
    "cocycle": 1e-10,
    "eom": 1e-10,
    "commutator": 1e-10,
    "oscillator": 1e-12,
    "finite_difference_relative": 1e-6,
    "bracket": 1e-9,
    "drift": 1e-8,
    "counterexample": 1e-3,
    "coboundary": 1e-12,
}


# 物理定数の便利関数
def get_default_hbar() -> float:
    """換算プランク定数の既定値を取得"""
    return get_config().get_float("physics", "hbar", 1.0)


def get_default_omega() -> float:
    """振動子の既定角振動数を取得"""
    return get_config().get_float("physics", "omega", 1.0)


# 許容誤差の便利関数
def get_tolerance(name: str) -> float:
    """名前付き許容誤差を取得"""
    return get_config().get_float("tolerance", name, _DEFAULT_TOLERANCES.get(name, 1e-10))


# Nambu積分の便利関数
def get_fd_step_scale() -> float:
    """有限差分ステップの係数を取得"""
    return get_config().get_float("nambu", "fd_step_scale", 1e-5)


def get_divergence_threshold() -> float:
    """発散判定のノルム閾値を取得"""
    return get_config().get_float("nambu", "divergence_threshold", 1e8)


def get_default_dt() -> float:
    """既定の時間刻みを取得"""
    return get_config().get_float("nambu", "default_dt", 1e-3)


# 検証ワーカーの便利関数
def get_max_workers() -> int:
    """並列ワーカー数を取得（GMM_THREADS が設定ファイルより優先）"""
    env_value = os.getenv("GMM_THREADS")
    if env_value:
        try:
            return max(1, int(env_value))
        except ValueError:
            logger.warning(f"⚠️ GMM_THREADS が整数ではありません: {env_value}")
    return max(1, get_config().get_int("workers", "max_workers", 4))


def get_verify_defaults() -> dict:
    """verify コマンドの既定値を取得"""
    config = get_config()
    return {
        "n": config.get_int("verify", "default_n", 3),
        "dim": config.get_int("verify", "default_dim", 4),
        "seed": config.get_int("verify", "default_seed", 42),
        "eom_times": config.get_int("verify", "eom_times", 5),
    }
