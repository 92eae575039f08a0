"""
設定ファイル・ログ設定のテスト
"""

import logging

import pytest

from utils import config_helper
from utils.config_helper import ConfigHelper, get_max_workers, get_tolerance
from utils.log_config import LogConfig


@pytest.fixture
def ini_file(tmp_path):
    path = tmp_path / "settings.ini"
    path.write_text(
        "[physics]\nhbar = 0.5\n"
        "[workers]\nmax_workers = 3\n"
        "[debug]\ndebug_mode = false\nnambu_debug = true\n"
        "[logging]\nenable_file_logging = false\nenable_console_logging = true\nlog_level = WARNING\n"
        "[verify]\ndefault_n = three\n",
        encoding="utf-8",
    )
    return path


class TestConfigHelper:
    """設定値の取得"""

    def test_typed_getters(self, ini_file):
        config = ConfigHelper(str(ini_file))
        assert config.get_float("physics", "hbar") == 0.5
        assert config.get_int("workers", "max_workers") == 3
        assert config.get_bool("debug", "nambu_debug") is True
        assert config.get_str("logging", "log_level") == "WARNING"

    def test_missing_values_fall_back(self, ini_file):
        config = ConfigHelper(str(ini_file))
        assert config.get_float("physics", "omega", 1.25) == 1.25
        assert config.get_str("nowhere", "key", "x") == "x"
        assert config.get_int("verify", "default_n", 3) == 3

    def test_missing_file_uses_defaults(self, tmp_path):
        config = ConfigHelper(str(tmp_path / "absent.ini"))
        assert config.get_bool("debug", "debug_mode", False) is False

    def test_repository_tolerances(self):
        assert get_tolerance("coboundary") == 1e-12
        assert get_tolerance("counterexample") == 1e-3

    def test_repository_sections_are_all_read(self):
        # 読み取り側のない節を残さない
        sections = set(ConfigHelper().config.sections())
        assert sections == {"logging", "debug", "physics", "tolerance", "nambu", "workers", "verify"}


class TestWorkers:
    """GMM_THREADS によるワーカー数"""

    def test_environment_overrides(self, monkeypatch):
        monkeypatch.setenv("GMM_THREADS", "2")
        assert get_max_workers() == 2

    def test_invalid_environment_is_ignored(self, monkeypatch, ini_file):
        monkeypatch.setenv("GMM_THREADS", "many")
        monkeypatch.setattr(config_helper, "_config_helper", ConfigHelper(str(ini_file)))
        assert get_max_workers() == 3

    def test_at_least_one(self, monkeypatch):
        monkeypatch.setenv("GMM_THREADS", "0")
        assert get_max_workers() == 1


class TestLogConfig:
    """ログ設定"""

    def test_levels_and_debug_categories(self, ini_file):
        root = logging.getLogger()
        saved_handlers, saved_level = root.handlers[:], root.level
        try:
            config = LogConfig(str(ini_file))
            assert root.level == logging.WARNING
            assert config.is_debug_enabled("nambu")
            assert not config.is_debug_enabled("algebra")
            assert not any(isinstance(h, logging.FileHandler) for h in root.handlers)
        finally:
            root.handlers[:] = saved_handlers
            root.setLevel(saved_level)
