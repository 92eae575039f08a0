"""
一般化行列力学システム

このパッケージは、n 添字の一般化行列による行列力学、振動数コチェイン、
フェルミオン的振動子、古典 Nambu 力学の数値検証機能を提供します。
"""

__version__ = "1.0.0"
__author__ = "Generalized Matrix Mechanics Team"
