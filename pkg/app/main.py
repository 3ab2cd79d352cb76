#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
検証ツール メインエントリーポイント

    python app/main.py verify --gen gnp:10,0.3,50,7
"""

import sys
from typing import List, Optional

import click

# 設定を最初に読み込む（.env の読み込みと設定検証）
import config  # noqa: F401
from copwin.cli import cli
from utils.logger import setup_logger

# メインロガーを設定
logger = setup_logger("main")


def main(argv: Optional[List[str]] = None) -> int:
    """メイン関数（終了コードを返す）"""
    try:
        result = cli.main(args=argv, prog_name="copwin", standalone_mode=False)
    except (KeyboardInterrupt, click.Abort):
        logger.info("プログラムが中断されました")
        return 130
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 0
    except Exception as e:
        logger.error(f"予期しない例外が発生しました: {e}", exc_info=True)
        return 1
    return result if isinstance(result, int) else 0


if __name__ == "__main__":
    sys.exit(main())
