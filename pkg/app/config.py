#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
シンプルな設定管理 - .envファイル中心の設計

すべての項目は任意。CLIのフラグが指定された場合はそちらが優先される。
"""

import os
import logging
from typing import List
from dotenv import load_dotenv

# ロガー設定
logger = logging.getLogger("config")

# .envファイルを読み込み
load_dotenv()

def get_env_bool(key: str, default: bool = False) -> bool:
    """環境変数をboolとして取得"""
    return os.getenv(key, str(default)).lower() in ['true', '1', 'yes', 'on']

def get_env_int(key: str, default: int) -> int:
    """環境変数をintとして取得"""
    try:
        return int(os.getenv(key, default))
    except ValueError:
        logger.warning(f"環境変数 {key} の値が不正です。デフォルト値 {default} を使用します")
        return default

def get_env_str(key: str, default: str, choices: List[str] = None) -> str:
    """環境変数を文字列として取得（choices指定時は候補外をデフォルトに戻す）"""
    value = os.getenv(key, default).strip().lower()
    if choices and value not in choices:
        logger.warning(f"環境変数 {key} の値 '{value}' は候補 {choices} にありません。デフォルト値 {default} を使用します")
        return default
    return value

# =============================================================================
# ログ設定
# =============================================================================
DEBUG_MODE = get_env_bool("DEBUG_MODE")
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").upper()
LOG_FILE_ENABLED = get_env_bool("LOG_FILE_ENABLED")
LOG_DIR = os.getenv("LOG_DIR", "logs")

# =============================================================================
# ソルバー設定
# =============================================================================
# 警官数の探索上限（--kmax のデフォルト）
K_MAX = get_env_int("K_MAX", 4)

# ℓ-coc の ℓ（--ell のデフォルト）
COC_ELL = get_env_int("COC_ELL", 2)

# =============================================================================
# シミュレーション設定
# =============================================================================
# ターン上限 = TURN_CAP_FACTOR · n^(k+1)
TURN_CAP_FACTOR = get_env_int("TURN_CAP_FACTOR", 4)

# 合成戦略と対戦する最適泥棒が参照する勝敗表の警官数
ROBBER_TABLE_COPS = get_env_int("ROBBER_TABLE_COPS", 2)

# エスコート警官C2/C3の「元の位置」の解釈
#   episode : 今回の応答が始まった時点の位置
#   original: 初期配置の位置
ESCORT_RETURN_MODES = ["episode", "original"]
ESCORT_RETURN_MODE = get_env_str("ESCORT_RETURN_MODE", "episode", ESCORT_RETURN_MODES)

# =============================================================================
# コーパス検証設定
# =============================================================================
VERIFY_WORKERS = get_env_int("VERIFY_WORKERS", 1)
CORPUS_MAX_N = get_env_int("CORPUS_MAX_N", 30)

# =============================================================================
# 設定検証
# =============================================================================
def validate_config():
    """設定値の検証"""
    errors = []

    # 値の範囲チェック
    if LOG_LEVEL not in ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]:
        errors.append(f"LOG_LEVEL の値が不正です: {LOG_LEVEL}")

    if K_MAX < 1:
        errors.append(f"K_MAX の値が不正です: {K_MAX}")

    if COC_ELL < 1:
        errors.append(f"COC_ELL の値が不正です: {COC_ELL}")

    if TURN_CAP_FACTOR < 1:
        errors.append(f"TURN_CAP_FACTOR の値が不正です: {TURN_CAP_FACTOR}")

    if not (1 <= ROBBER_TABLE_COPS <= 3):
        errors.append(f"ROBBER_TABLE_COPS の値が不正です: {ROBBER_TABLE_COPS}")

    if VERIFY_WORKERS < 1:
        errors.append(f"VERIFY_WORKERS の値が不正です: {VERIFY_WORKERS}")

    if not (1 <= CORPUS_MAX_N <= 64):
        errors.append(f"CORPUS_MAX_N の値が不正です: {CORPUS_MAX_N}")

    if errors:
        for error in errors:
            logger.error(error)
        raise ValueError("設定エラーが発生しました")

    logger.debug("設定検証が完了しました")

# =============================================================================
# 設定情報の表示
# =============================================================================
def print_config_summary():
    """設定の概要を表示"""
    if DEBUG_MODE:
        logger.info("=== 検証ツール設定情報 ===")
        logger.info(f"デバッグモード: {DEBUG_MODE}")
        logger.info(f"警官数上限 K_MAX: {K_MAX}")
        logger.info(f"ℓ-coc の ℓ: {COC_ELL}")
        logger.info(f"ターン上限係数: {TURN_CAP_FACTOR}")
        logger.info(f"最適泥棒の勝敗表警官数: {ROBBER_TABLE_COPS}")
        logger.info(f"エスコート復帰モード: {ESCORT_RETURN_MODE}")
        logger.info(f"検証ワーカー数: {VERIFY_WORKERS}")
        logger.info("==========================")

# 初期化時に実行
validate_config()
print_config_summary()
