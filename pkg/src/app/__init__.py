"""
コマンドラインアプリケーション

verify / spectrum / oscillator / nambu の各サブコマンドを提供します。
"""
