"""
ストレージ関連モジュール

検証レポート・スペクトル・軌道の JSON/CSV 保存と、入力ファイルの読み込みを提供します。
"""
