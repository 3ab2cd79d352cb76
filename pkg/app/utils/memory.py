#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
プロセスのメモリ使用量を取得するユーティリティ

勝敗表は状態数に比例してメモリを使うため、大きな表を作った後にログへ残す。
"""

import os
from typing import Dict, Union

import psutil

def get_memory_info() -> Dict[str, Union[float, str]]:
    """
    現在のプロセスとシステム全体のメモリ情報を取得

    Returns:
        dict: rss_mb（プロセス常駐メモリ）、system_percent（システム使用率）。
              取得に失敗した場合は error キーのみ
    """
    try:
        process = psutil.Process(os.getpid())
        rss = process.memory_info().rss
        vm = psutil.virtual_memory()
        return {
            "rss_mb": round(rss / (1024 * 1024), 1),
            "system_percent": vm.percent,
        }
    except Exception as e:
        return {"error": str(e)}

def format_memory_info() -> str:
    """ログ出力用の1行表現"""
    info = get_memory_info()
    if "error" in info:
        return f"メモリ情報取得失敗: {info['error']}"
    return f"RSS={info['rss_mb']}MB システム使用率={info['system_percent']}%"
