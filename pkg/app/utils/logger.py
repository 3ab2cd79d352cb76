#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
ロギング設定と機能を提供するモジュール

標準出力は機械可読な結果（CSV・トレース）専用のため、ログはすべて標準エラーに出す。
"""

import logging
import os
import sys
from logging.handlers import RotatingFileHandler
from typing import Dict

from config import LOG_LEVEL, DEBUG_MODE, LOG_FILE_ENABLED, LOG_DIR

# ログファイルの保存先
LOG_FILE = os.path.join(LOG_DIR, "copwin.log")

# ログフォーマット
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DETAILED_LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - [%(filename)s:%(lineno)d] - %(message)s"

# 初期化済みロガーを追跡するグローバル辞書
_initialized_loggers: Dict[str, logging.Logger] = {}

class SafeUnicodeStreamHandler(logging.StreamHandler):
    """
    コンソールのエンコーディングで表現できない文字（日本語メッセージ等）を
    置換文字に落として出力するStreamHandler
    """
    def __init__(self, stream=None):
        super().__init__(stream)
        self.encoding = getattr(stream, 'encoding', None) or sys.getdefaultencoding() or 'utf-8'

    def emit(self, record):
        try:
            msg = self.format(record)
            try:
                msg.encode(self.encoding)
            except (UnicodeEncodeError, LookupError):
                msg = msg.encode(self.encoding, errors='replace').decode(self.encoding, errors='replace')
            self.stream.write(msg + self.terminator)
            self.flush()
        except RecursionError:
            raise
        except Exception:
            self.handleError(record)

def setup_logger(name: str) -> logging.Logger:
    """
    名前付きロガーをセットアップ（重複初期化を防止）

    Args:
        name: ロガー名（通常はモジュール名 __name__）

    Returns:
        logging.Logger: セットアップされたロガー
    """
    if name in _initialized_loggers:
        return _initialized_loggers[name]

    logger = logging.getLogger(name)

    # DEBUG_MODEが有効な場合は強制的にDEBUGレベルに設定
    if DEBUG_MODE:
        log_level = logging.DEBUG
    else:
        log_level = getattr(logging, LOG_LEVEL, logging.INFO)

    logger.setLevel(log_level)
    logger.propagate = False

    for handler in list(logger.handlers):
        logger.removeHandler(handler)

    log_format = DETAILED_LOG_FORMAT if DEBUG_MODE else LOG_FORMAT
    console_handler = SafeUnicodeStreamHandler(sys.stderr)
    console_handler.setFormatter(logging.Formatter(log_format))
    logger.addHandler(console_handler)

    # ファイルハンドラ（ローテーション付き）は明示的に有効化された場合のみ
    if LOG_FILE_ENABLED:
        try:
            os.makedirs(LOG_DIR, exist_ok=True)
            file_handler = RotatingFileHandler(
                LOG_FILE,
                maxBytes=5 * 1024 * 1024,  # 5MB
                backupCount=5,
                encoding='utf-8'
            )
            file_handler.setFormatter(logging.Formatter(log_format))
            logger.addHandler(file_handler)
        except Exception as e:
            # ファイルへの出力に失敗しても標準エラーには出力できるよう続行
            logger.warning(f"ログファイルの設定に失敗しました: {e}")

    _initialized_loggers[name] = logger
    logger.debug(f"ロガー '{name}' を初期化しました (レベル: {logging.getLevelName(log_level)})")

    return logger
