"""
テスト共通設定

src/ と tools/ を import パスに追加し、乱数生成器とサンプルファイルのフィクスチャを提供する。
"""

import sys
from pathlib import Path

import numpy as np
import pytest

PROJECT_ROOT = Path(__file__).resolve().parent.parent
SRC_PATH = PROJECT_ROOT / "src"
TOOLS_PATH = PROJECT_ROOT / "tools"
if str(SRC_PATH) not in sys.path:
    sys.path.insert(0, str(SRC_PATH))
if str(TOOLS_PATH) not in sys.path:
    sys.path.append(str(TOOLS_PATH))


@pytest.fixture
def rng() -> np.random.Generator:
    """固定シードの乱数生成器"""
    return np.random.default_rng(20240601)


@pytest.fixture
def project_root() -> Path:
    return PROJECT_ROOT


@pytest.fixture
def samples_dir() -> Path:
    return PROJECT_ROOT / "samples"
