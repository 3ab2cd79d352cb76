#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
検証ツール全体で使う例外クラス
"""

from typing import Optional


class GraphError(ValueError):
    """頂点IDの範囲外・自己ループ・多重辺・不正なパスなど"""


class GraphFormatError(GraphError):
    """辺リストファイルの解析エラー（行番号付き）"""

    def __init__(self, message: str, line_no: Optional[int] = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"{line_no}行目: {message}"
        super().__init__(message)


class CoverError(ValueError):
    """不正な ℓ、またはカバーになっていない頂点集合"""


class NoWinningPlacementError(ValueError):
    """勝ちとなる初期配置が存在しない勝敗表から警官戦略を取り出そうとした"""


class BudgetViolation(AssertionError):
    """
    合成戦略が警官数の上界（内側グラフごとの上界、または全体の上界）を超えた。
    反例候補になるため、丸めずにそのまま報告する。
    """


class IllegalMoveError(RuntimeError):
    """戦略または泥棒方策が閉近傍の外へ動いた（実装バグ）"""


class ContractViolation(RuntimeError):
    """役割の事前条件を満たさない入力で状態を進めようとした"""
