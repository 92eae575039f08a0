"""
インフラストラクチャ層

ファイルシステムとの入出力（レポート保存、入力ファイル読み込み）を提供します。
"""
