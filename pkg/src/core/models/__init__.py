"""
データモデル

一般化行列、コチェイン、ハミルトニアン組、Nambu 系、検証レポート、入力ファイルのデータ構造を定義します。
"""
