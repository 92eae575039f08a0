"""
コアロジック

一般化行列力学の計算サービス、データモデル、検証ワークフローを管理します。
"""
