"""
計算サービス

一般化行列の代数、コホモロジー、スペクトル、時間発展、振動子、古典 Nambu 力学を提供します。
"""

from . import algebra_service
from . import cohomology_service
from . import spectrum_service
from . import dynamics_service
from . import nambu_service

# クラスとして提供するサービス
from .oscillator_service import FermionicOscillatorService, OscillatorCheck, OscillatorReport, verify_oscillator

__all__ = [
    'algebra_service',
    'cohomology_service',
    'spectrum_service',
    'dynamics_service',
    'nambu_service',
    'FermionicOscillatorService',
    'OscillatorCheck',
    'OscillatorReport',
    'verify_oscillator',
]
