"""
ユーティリティ

ログ設定、設定管理、エラー定義、添字・置換のヘルパー関数を提供します。
"""
