"""
検証ワークフロー

スイートごとの検証ケース構築と、ワーカープールによる実行・レポート組み立てを管理します。
"""

from .verification_engine import VerificationEngine
from .verification_suites import build_cases, resolve_tolerances

__all__ = [
    'VerificationEngine',
    'build_cases',
    'resolve_tolerances',
]
