#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
game_solver.py - k人の警官ゲームの後退解析（アトラクタ計算）

状態は (警官のソート済み多重集合, 泥棒の位置, 手番)。
ランク = 警官が捕獲を強制するまでの警官手番数。
  警官手番: 1 + min（警官の移動先の泥棒手番ランク）
  泥棒手番: max（泥棒の移動先の警官手番ランク）
警官層 ρ → 泥棒層 ρ → 警官層 ρ+1 の順に層ごとに確定させる。
"""

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from itertools import combinations, combinations_with_replacement, product
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from copwin.errors import ContractViolation, GraphError, NoWinningPlacementError
from copwin.graph_core import Edge, Graph, components, induced_subgraph
from utils.logger import setup_logger
from utils.memory import format_memory_info

logger = setup_logger(__name__)

CopTuple = Tuple[int, ...]

# ランク配列での「未確定（= 泥棒の逃走）」
ESCAPE = -1


class Turn(str, Enum):
    COP = "cop"
    ROBBER = "robber"


@dataclass(frozen=True)
class GameState:
    cops: CopTuple
    robber: int
    turn: Turn = Turn.COP


@dataclass(frozen=True)
class Unknown:
    """k_max 人以下では警官が勝てなかった"""
    k_max: int

    def __str__(self) -> str:
        return f"unknown({self.k_max})"


CopNumber = Union[int, Unknown]


def sort_cops(cops: Iterable[int]) -> CopTuple:
    return tuple(sorted(cops))


def robber_graph_of(G: Graph, robber_edges: Optional[Iterable[Edge]]) -> Graph:
    """泥棒が使える辺だけのグラフ（None なら G そのもの）"""
    if robber_edges is None:
        return G
    restricted = Graph.build(G.n, robber_edges)
    extra = restricted.edges - G.edges
    if extra:
        raise GraphError(f"robber_edges に G に無い辺があります: {sorted(extra)[:3]}")
    return restricted


class WinTable:
    """
    解析済みの勝敗表

    Attributes:
        graph: 警官が動くグラフ
        robber_graph: 泥棒が動くグラフ（同じ頂点集合、辺は graph の部分集合）
        k: 警官数
        cop_tuples: ソート済み警官タプルの一覧（辞書順）
        cop_rank / robber_rank: [タプル番号, 泥棒位置] → ランク（ESCAPE は逃走）
    """

    def __init__(self, graph: Graph, robber_graph: Graph, k: int,
                 cop_tuples: List[CopTuple], successor_ids: List[np.ndarray],
                 cop_rank: np.ndarray, robber_rank: np.ndarray):
        self.graph = graph
        self.robber_graph = robber_graph
        self.k = k
        self.cop_tuples = cop_tuples
        self.index: Dict[CopTuple, int] = {t: i for i, t in enumerate(cop_tuples)}
        self.successor_ids = successor_ids
        self.cop_rank = cop_rank
        self.robber_rank = robber_rank

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def state_count(self) -> int:
        return 2 * len(self.cop_tuples) * self.n

    def tuple_id(self, cops: Iterable[int]) -> int:
        key = sort_cops(cops)
        try:
            return self.index[key]
        except KeyError:
            raise ContractViolation(f"{self.k}人用の表に無い警官配置です: {key}") from None

    def rank(self, state: GameState) -> Optional[int]:
        """状態のランク（逃走状態は None）"""
        self.graph.check_vertex(state.robber)
        table = self.cop_rank if state.turn == Turn.COP else self.robber_rank
        value = int(table[self.tuple_id(state.cops), state.robber])
        return None if value == ESCAPE else value

    def is_cop_win(self, state: GameState) -> bool:
        return self.rank(state) is not None

    def successors(self, cops: Iterable[int]) -> List[CopTuple]:
        return [self.cop_tuples[j] for j in self.successor_ids[self.tuple_id(cops)]]

    def placement_rank(self, placement: Iterable[int]) -> Optional[int]:
        """配置を見た泥棒が最善の初期位置を選んだときのランク（勝てない配置は None）"""
        row = self.cop_rank[self.tuple_id(placement)]
        if (row == ESCAPE).any():
            return None
        return int(row.max())

    def winning_placements(self) -> List[CopTuple]:
        wins = (self.cop_rank != ESCAPE).all(axis=1)
        return [self.cop_tuples[i] for i in np.flatnonzero(wins)]

    def has_winning_placement(self) -> bool:
        return bool((self.cop_rank != ESCAPE).all(axis=1).any())


def cop_successors(G: Graph, k: int) -> Tuple[List[CopTuple], List[np.ndarray]]:
    """
    全ソート済み警官タプルと、各タプルから1手で行けるタプル番号の配列

    後ろ側の部分タプルごとに遷移先集合をメモ化して組み立てる。
    移動関係は対称なので、遷移先はそのまま先行状態としても使える。
    """
    closed = [(v,) + G.adjacency[v] for v in G.vertices]
    tuples = list(combinations_with_replacement(range(G.n), k))
    index = {t: i for i, t in enumerate(tuples)}

    @lru_cache(maxsize=None)
    def suffix_moves(suffix: CopTuple) -> FrozenSet[CopTuple]:
        if not suffix:
            return frozenset({()})
        rest = suffix_moves(suffix[1:])
        return frozenset(sort_cops((x,) + s) for x in closed[suffix[0]] for s in rest)

    successor_ids = [np.array(sorted(index[s] for s in suffix_moves(t)), dtype=np.int64) for t in tuples]
    return tuples, successor_ids


def solve(G: Graph, k: int, robber_edges: Optional[Iterable[Edge]] = None) -> WinTable:
    """
    k人の警官ゲームを後退解析で解く

    Args:
        G: 警官が動くグラフ
        k: 警官数
        robber_edges: 泥棒が使える辺（None なら G の全辺。滞在は常に可能）

    Raises:
        ValueError: k < 1
    """
    if k < 1:
        raise ValueError(f"警官数は1以上である必要があります: {k}")
    robber_graph = robber_graph_of(G, robber_edges)
    n = G.n
    tuples, successor_ids = cop_successors(G, k)
    count = len(tuples)

    cop_rank = np.full((count, n), ESCAPE, dtype=np.int64)
    robber_rank = np.full((count, n), ESCAPE, dtype=np.int64)
    robber_moves = [(v,) + robber_graph.adjacency[v] for v in range(n)]
    # 泥棒手番状態ごとの「まだ警官手番ランクが確定していない移動先」の数
    pending = np.array([[len(robber_moves[r]) for r in range(n)] for _ in range(count)], dtype=np.int64)

    captured: List[Tuple[int, int]] = []
    for i, t in enumerate(tuples):
        for r in set(t):
            cop_rank[i, r] = 0
            robber_rank[i, r] = 0
            captured.append((i, r))

    def settle_cop_states(states: List[Tuple[int, int]], rho: int) -> List[Tuple[int, int]]:
        """確定した警官手番状態から泥棒手番状態のカウンタを減らし、新たに確定した状態を返す"""
        settled = []
        for i, r in states:
            for r_prev in robber_moves[r]:
                if robber_rank[i, r_prev] != ESCAPE:
                    continue
                pending[i, r_prev] -= 1
                if pending[i, r_prev] == 0:
                    robber_rank[i, r_prev] = rho
                    settled.append((i, r_prev))
        return settled

    # 層0: 捕獲済み状態。泥棒手番の捕獲済み状態も次の警官層の起点
    frontier = captured + settle_cop_states(captured, 0)
    rho = 0
    while frontier:
        rho += 1
        new_cop_states = []
        for j, r in frontier:
            for i in successor_ids[j]:
                if cop_rank[i, r] == ESCAPE:
                    cop_rank[i, r] = rho
                    new_cop_states.append((int(i), r))
        frontier = settle_cop_states(new_cop_states, rho)

    table = WinTable(G, robber_graph, k, tuples, successor_ids, cop_rank, robber_rank)
    wins = int((cop_rank != ESCAPE).sum())
    logger.debug(f"解析完了: n={n} k={k} 状態数={table.state_count} 警官勝ち(警官手番)={wins} 最大ランク={rho - 1}")
    if table.state_count > 100_000:
        logger.debug(f"大きな勝敗表を構築しました: {format_memory_info()}")
    return table


def _connected_cop_number(G: Graph, k_max: int) -> CopNumber:
    for k in range(1, k_max + 1):
        if solve(G, k).has_winning_placement():
            return k
    return Unknown(k_max)


def cop_number(G: Graph, k_max: int) -> CopNumber:
    """
    警官数（k_max 以下で見つからなければ Unknown）

    非連結グラフでは成分ごとの警官数の和。泥棒は配置を見てから成分を選べるため、
    どの成分にも必要数を置く必要がある。
    """
    if G.n == 0:
        return 0
    total = 0
    for comp in components(G):
        sub = induced_subgraph(G, comp).graph
        c = _connected_cop_number(sub, k_max)
        if isinstance(c, Unknown):
            logger.info(f"成分 {min(comp)} (n={sub.n}) は {k_max} 人以下では警官勝ちになりません")
            return Unknown(k_max)
        total += c
    return total


def least_winning_k(G: Graph, k_max: int, robber_edges: Optional[Iterable[Edge]] = None) -> Optional[WinTable]:
    """警官勝ちになる最小の k の勝敗表（k_max まで無ければ None）"""
    edges = None if robber_edges is None else list(robber_edges)
    for k in range(1, k_max + 1):
        table = solve(G, k, edges)
        if table.has_winning_placement():
            return table
    return None


class CopStrategy:
    """
    勝敗表から取り出した警官戦略

    常にランクが厳密に下がる遷移先を選ぶ（同ランクなら辞書順最小）。
    """

    def __init__(self, table: WinTable, placement: Optional[Iterable[int]] = None):
        self.table = table
        if placement is not None:
            # 勝ちでない配置も許す（ESCAPE の状態では動かない）
            self.placement: CopTuple = sort_cops(placement)
            table.tuple_id(self.placement)
            return
        placements = table.winning_placements()
        if not placements:
            raise NoWinningPlacementError(f"{table.k}人では勝ちとなる初期配置がありません")
        self.placement = placements[0]

    @property
    def k(self) -> int:
        return self.table.k

    def is_winning(self, cops: Iterable[int], robber: int) -> bool:
        return self.table.is_cop_win(GameState(sort_cops(cops), robber, Turn.COP))

    def move(self, cops: Iterable[int], robber: int) -> CopTuple:
        """
        警官手番の次の警官タプル

        Raises:
            ContractViolation: 警官勝ちでない状態で呼ばれた
        """
        t = self.table.tuple_id(cops)
        current = int(self.table.cop_rank[t, robber])
        if current == ESCAPE:
            raise ContractViolation(f"警官勝ちでない状態です: cops={sort_cops(cops)} robber={robber}")
        if current == 0:
            return sort_cops(cops)
        ids = self.table.successor_ids[t]
        ranks = self.table.robber_rank[ids, robber]
        candidates = [int(j) for j, value in zip(ids, ranks) if value != ESCAPE and value == current - 1]
        return self.table.cop_tuples[min(candidates)]


class RobberPolicy:
    """
    勝敗表に基づく逃走方策

    逃走できる位置があればそれを選び、無ければ捕獲ランクを最大化する（同値は最小ID）。
    警官の人数が表の k と一致すれば最適。表より多い警官と対戦する場合は、警官の
    k 人部分集合のうち最も泥棒に不利なもの（ランク最小）で評価するヒューリスティックで、
    全員を相手にした最適な逃走ではない。
    """

    def __init__(self, table: WinTable):
        self.table = table

    @property
    def graph(self) -> Graph:
        return self.table.robber_graph

    def value(self, cops: Sequence[int], robber: int) -> float:
        """警官手番状態の評価値（逃走は無限大）"""
        cops = sort_cops(cops)
        k = self.table.k
        if len(cops) < k:
            raise ContractViolation(f"警官 {len(cops)} 人に {k} 人用の表は使えません")
        best = float("inf")
        for subset in set(combinations(cops, k)):
            value = int(self.table.cop_rank[self.table.tuple_id(subset), robber])
            if value != ESCAPE:
                best = min(best, value)
        return best

    def _choose(self, cops: Sequence[int], options: Iterable[int]) -> int:
        best_vertex, best_value = None, -1.0
        for v in sorted(options):
            value = self.value(cops, v)
            if value > best_value:
                best_vertex, best_value = v, value
        return best_vertex

    def start(self, cops: Sequence[int], allowed: Optional[Iterable[int]] = None) -> int:
        """初期位置（allowed 指定時はその中から選ぶ）"""
        return self._choose(cops, self.table.graph.vertices if allowed is None else allowed)

    def move(self, cops: Sequence[int], robber: int) -> int:
        return self._choose(cops, (robber,) + self.graph.adjacency[robber])


def extract_cop_strategy(table: WinTable) -> CopStrategy:
    return CopStrategy(table)


def extract_optimal_robber(table: WinTable) -> RobberPolicy:
    return RobberPolicy(table)


def naive_oracle(G: Graph, robber_edges: Optional[Iterable[Edge]] = None):
    """
    深さ制限付きミニマックス（検証用の独立実装）

    返り値 cops_win(cops, robber, depth) は、警官手番の状態から depth 手以内に
    捕獲を強制できるか。遷移は各警官の閉近傍の直積をそのまま列挙する。
    メモは返した関数ごとに共有される。
    """
    robber_graph = robber_graph_of(G, robber_edges)
    closed = [(v,) + G.adjacency[v] for v in G.vertices]
    robber_options = [(v,) + robber_graph.adjacency[v] for v in G.vertices]

    @lru_cache(maxsize=None)
    def cops_win(state_cops: CopTuple, r: int, d: int) -> bool:
        if r in state_cops:
            return True
        if d == 0:
            return False
        for choice in product(*(closed[c] for c in state_cops)):
            if r in choice:
                return True
            nxt = sort_cops(choice)
            if all(cops_win(nxt, r2, d - 1) for r2 in robber_options[r]):
                return True
        return False

    def query(cops: Iterable[int], robber: int, depth: int) -> bool:
        return cops_win(sort_cops(cops), robber, depth)

    return query


def naive_cop_win(G: Graph, k: int, cops: Iterable[int], robber: int, depth: int,
                  robber_edges: Optional[Iterable[Edge]] = None) -> bool:
    start = sort_cops(cops)
    if len(start) != k:
        raise ValueError(f"警官の人数が {k} ではありません: {start}")
    return naive_oracle(G, robber_edges)(start, robber, depth)
