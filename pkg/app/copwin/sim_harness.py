#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
sim_harness.py - ゲームの実行とトレース検査、定理の検証パイプライン

run_game は 警官配置 → 泥棒配置 → 警官の手 → 泥棒の手 … を交互に進め、
全ての手の合法性を検査しながらトレースを記録する。
ターン番号は警官の手番を数える（配置時の捕獲はターン0）。
"""

import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, Field

from config import ESCORT_RETURN_MODE, K_MAX, ROBBER_TABLE_COPS, TURN_CAP_FACTOR
from copwin.errors import BudgetViolation, GraphError, IllegalMoveError
from copwin.game_solver import CopStrategy, RobberPolicy, cop_number, solve
from copwin.graph_core import Graph, VertexSet, all_pairs_distances, is_connected
from copwin.params import coc, require_cover, vcn
from copwin.reduction_engine import ReductionTrace, component_reports, reduce
from copwin.strategy import ComposedStrategy, build_component_plans, compose, match_slots
from utils.logger import setup_logger

logger = setup_logger(__name__)

# 捕獲までの「滞在・引き返し」回数の上限に足す定数（成分の直径の上界）
BACKTRACK_ALLOWANCE = 7

REPORT_COLUMNS = [
    "graph_id", "n", "m", "coc2", "vcn", "r", "u_prime", "cop_number",
    "bound", "strategy_cops", "capture_turn", "verdict",
]


class Mover(str, Enum):
    PLACE = "place"
    COPS = "cops"
    ROBBER = "robber"


@dataclass(frozen=True)
class Captured:
    turn: int

    def __str__(self) -> str:
        return f"captured({self.turn})"


@dataclass(frozen=True)
class Timeout:
    cap: int

    def __str__(self) -> str:
        return f"timeout({self.cap})"


Outcome = Union[Captured, Timeout]


@dataclass(frozen=True)
class TurnRecord:
    turn: int
    mover: Mover
    cops: Tuple[int, ...]
    robber: int
    roles: Tuple[str, ...] = ()


@dataclass
class SimTrace:
    graph_id: str
    records: List[TurnRecord] = field(default_factory=list)
    outcome: Optional[Outcome] = None
    c1_approach: Optional[int] = None

    def robber_positions(self) -> List[Tuple[int, int]]:
        """(ターン, 泥棒の位置) の列。配置と泥棒の各手のみ"""
        return [(rec.turn, rec.robber) for rec in self.records if rec.mover != Mover.COPS]

    @property
    def captured(self) -> bool:
        return isinstance(self.outcome, Captured)


# =============================================================================
# 警官コントローラと泥棒方策
# =============================================================================
class SolverController:
    """
    勝敗表の戦略をそのまま動かすコントローラ。
    警官勝ちでない状態では全員その場に留まる。
    """

    def __init__(self, strategy: CopStrategy):
        self.strategy = strategy
        self.graph = strategy.table.graph
        self.positions: Tuple[int, ...] = tuple(strategy.placement)

    def placement(self) -> Tuple[int, ...]:
        return self.positions

    def start(self, robber: int) -> None:
        self.graph.check_vertex(robber)

    def roles(self) -> Tuple[str, ...]:
        return ("SOLVER",) * len(self.positions)

    def step(self, robber: int) -> Tuple[int, ...]:
        if self.strategy.is_winning(self.positions, robber):
            dest = self.strategy.move(self.positions, robber)
            self.positions = match_slots(self.graph, self.positions, dest)
        return self.positions


class GreedyRobber:
    """警官への最小距離を最大化する（同値は最小ID）"""

    def __init__(self, G: Graph):
        self.graph = G
        self.dist = all_pairs_distances(G)

    def _score(self, cops: Sequence[int], v: int) -> int:
        return min(int(self.dist[c, v]) for c in cops)

    def _choose(self, cops: Sequence[int], options: Iterable[int]) -> int:
        return max(sorted(options), key=lambda v: (self._score(cops, v), -v))

    def start(self, cops: Sequence[int], allowed: Optional[Iterable[int]] = None) -> int:
        return self._choose(cops, self.graph.vertices if allowed is None else allowed)

    def move(self, cops: Sequence[int], robber: int) -> int:
        return self._choose(cops, (robber,) + self.graph.adjacency[robber])


class RandomRobber:
    """シード付きの一様ランダムな合法手（滞在を含む）"""

    def __init__(self, G: Graph, seed: int):
        self.graph = G
        self.rng = random.Random(seed)

    def start(self, cops: Sequence[int], allowed: Optional[Iterable[int]] = None) -> int:
        return self.rng.choice(sorted(self.graph.vertices if allowed is None else allowed))

    def move(self, cops: Sequence[int], robber: int) -> int:
        return self.rng.choice((robber,) + self.graph.adjacency[robber])


Controller = Union[ComposedStrategy, SolverController]
Robber = Union[RobberPolicy, GreedyRobber, RandomRobber]


def default_cap(n: int, k: int) -> int:
    """ターン上限 TURN_CAP_FACTOR · n^(k+1)"""
    return TURN_CAP_FACTOR * max(n, 2) ** (k + 1)


def _legal(G: Graph, a: int, b: int) -> bool:
    return a == b or G.has_edge(a, b)


# =============================================================================
# ゲーム実行
# =============================================================================
def run_game(G: Graph, strategy: Union[Controller, CopStrategy], robber: Robber, cap: int,
             robber_start: Optional[Iterable[int]] = None, graph_id: str = "") -> SimTrace:
    """
    1ゲームを実行してトレースを返す

    Args:
        robber_start: 泥棒の初期位置の候補（None なら全頂点）

    Raises:
        ValueError: cap ≤ 0
        IllegalMoveError: どちらかが閉近傍の外へ動いた
    """
    if cap <= 0:
        raise ValueError(f"ターン上限は正である必要があります: {cap}")
    controller = SolverController(strategy) if isinstance(strategy, CopStrategy) else strategy
    trace = SimTrace(graph_id=graph_id)

    cops = tuple(controller.placement())
    for c in cops:
        G.check_vertex(c)
    allowed = None if robber_start is None else sorted(robber_start)
    r = robber.start(cops, allowed)
    G.check_vertex(r)
    if allowed is not None and r not in allowed:
        raise IllegalMoveError(f"泥棒の初期位置 {r} が候補外です")
    trace.records.append(TurnRecord(0, Mover.PLACE, cops, r, controller.roles()))
    if r in cops:
        trace.outcome = Captured(0)
        return trace
    controller.start(r)

    for turn in range(1, cap + 1):
        new_cops = tuple(controller.step(r))
        if len(new_cops) != len(cops) or not all(_legal(G, a, b) for a, b in zip(cops, new_cops)):
            raise IllegalMoveError(f"ターン{turn}: 警官の不正な移動 {cops} → {new_cops}")
        cops = new_cops
        trace.records.append(TurnRecord(turn, Mover.COPS, cops, r, controller.roles()))
        if r in cops:
            trace.outcome = Captured(turn)
            break

        new_r = robber.move(cops, r)
        if not _legal(G, r, new_r):
            raise IllegalMoveError(f"ターン{turn}: 泥棒の不正な移動 {r} → {new_r}")
        r = new_r
        trace.records.append(TurnRecord(turn, Mover.ROBBER, cops, r))
        if r in cops:
            trace.outcome = Captured(turn)
            break
    else:
        trace.outcome = Timeout(cap)

    if isinstance(controller, ComposedStrategy):
        trace.c1_approach = controller.first_approach
    logger.debug(f"ゲーム終了 [{graph_id}]: {trace.outcome} 記録数={len(trace.records)}")
    return trace


# =============================================================================
# トレース検査
# =============================================================================
def left_component(t: SimTrace, vertices: Iterable[int]) -> bool:
    members = set(vertices)
    return any(pos not in members for _, pos in t.robber_positions())


def check_escort_confinement(t: SimTrace, vertices: Iterable[int], u_prime_h: Iterable[int]) -> bool:
    """
    最初の外出（カバー U′_H の外へ出て戻るまで）が終わった後、泥棒が外側どうしの辺を
    1手でも渡り、その試みが捕獲で終わらなかった場合に False

    試みは渡った手から次にカバーへ戻る手まで。外側にいる間か、戻った直後の
    警官手番までに捕まれば解決とみなす。
    泥棒が成分の外へ出た時点で検査を打ち切る（担当の切り替えが起きるため）。
    """
    if t.records and not any(role.startswith("ESCORT") for role in t.records[0].roles):
        logger.debug("エスコートの注釈が無いトレースです")
    members = set(vertices)
    cover = set(u_prime_h)
    capture_turn = t.outcome.turn if isinstance(t.outcome, Captured) else None

    exited = activated = False
    prev: Optional[int] = None
    crossing: Optional[Tuple[int, int, int]] = None
    violation: Optional[Tuple[int, int, int]] = None
    for turn, pos in t.robber_positions():
        if pos not in members:
            break
        if (activated and crossing is None and prev is not None and prev != pos
                and prev not in cover and pos not in cover):
            crossing = (turn, prev, pos)
        if pos in cover:
            if crossing is not None and (capture_turn is None or capture_turn > turn + 1):
                violation = crossing
                break
            crossing = None
            activated = activated or exited
        else:
            exited = True
        prev = pos

    if violation is None and crossing is not None and capture_turn is None:
        violation = crossing
    if violation is not None:
        turn, a, b = violation
        logger.error(f"[{t.graph_id}] ターン{turn}: 外側の辺 {a}-{b} を渡った後に捕まりませんでした")
        return False
    return True


def backtrack_count(t: SimTrace) -> int:
    """捕獲までの泥棒の滞在と引き返し（直前の辺を逆にたどる手）の回数"""
    positions = [pos for _, pos in t.robber_positions()]
    count = 0
    for i in range(1, len(positions)):
        if positions[i] == positions[i - 1]:
            count += 1
        elif i >= 2 and positions[i] == positions[i - 2]:
            count += 1
    return count


def format_sim_trace(t: SimTrace) -> str:
    lines = [f"# graph={t.graph_id}"]
    for rec in t.records:
        line = f"{rec.turn} {rec.mover.value} cops={','.join(map(str, rec.cops))} robber={rec.robber}"
        if rec.roles:
            line += f" roles={';'.join(rec.roles)}"
        lines.append(line)
    lines.append(f"outcome={t.outcome}")
    return "\n".join(lines) + "\n"


# =============================================================================
# 定理の検証
# =============================================================================
class TheoremReport(BaseModel):
    graph_id: str
    n: int
    m: int
    coc2: int
    vcn: int
    r: int
    u_prime: int
    cop_number: str
    bound: int
    strategy_cops: Optional[int] = None
    capture_turn: Optional[int] = None
    verdict: str = "unknown"
    checks: Dict[str, bool] = Field(default_factory=dict)
    notes: List[str] = Field(default_factory=list)

    def row(self) -> List[str]:
        values = self.model_dump()
        return ["" if values[c] is None else str(values[c]) for c in REPORT_COLUMNS]

    def failed_checks(self) -> List[str]:
        return [name for name, ok in self.checks.items() if not ok]


def report_row(report: TheoremReport) -> List[str]:
    return report.row()


def _verdict(report: TheoremReport, known: Optional[int]) -> str:
    # 判定は不等式だけで決める。途中の検査の失敗は checks と notes に残す
    if known is None:
        return "unknown"
    return "pass" if known <= report.bound else "fail"


def _play_components(G: Graph, U: VertexSet, trace: ReductionTrace, report: TheoremReport,
                     cap: Optional[int], return_mode: str) -> None:
    """残余成分ごとに合成戦略と最適な泥棒を対戦させ、結果を report に書き込む"""
    try:
        plans = build_component_plans(G, trace)
        report.checks["inner_bound"] = True
    except BudgetViolation as e:
        report.checks["inner_bound"] = False
        report.notes.append(str(e))
        logger.error(f"[{report.graph_id}] {e}")
        return

    robber_table = None
    inner_k = max((p.k for p in plans), default=0)
    game_cap = cap or default_cap(G.n, inner_k + 1)
    report.checks.update({"budget": True, "capture": True, "confinement": True, "backtracks": True})
    for plan in plans or [None]:
        component = None if plan is None else plan.vertices
        try:
            strategy = compose(G, U, trace, component, plans, return_mode)
        except BudgetViolation as e:
            report.checks["budget"] = False
            report.notes.append(str(e))
            logger.error(f"[{report.graph_id}] {e}")
            return
        report.strategy_cops = strategy.cop_count
        if robber_table is None:
            robber_table = solve(G, min(strategy.cop_count, ROBBER_TABLE_COPS))
        t = run_game(G, strategy, RobberPolicy(robber_table), game_cap, component, report.graph_id)

        if not t.captured:
            report.checks["capture"] = False
            report.notes.append(f"成分 {min(component) if component else '-'}: {t.outcome}")
            continue
        report.capture_turn = max(report.capture_turn or 0, t.outcome.turn)

        if plan is None or not plan.u_prime_h or left_component(t, plan.vertices):
            continue
        if not check_escort_confinement(t, plan.vertices, plan.u_prime_h):
            report.checks["confinement"] = False
        if t.c1_approach is not None and backtrack_count(t) > BACKTRACK_ALLOWANCE + t.c1_approach:
            report.checks["backtracks"] = False
            report.notes.append(f"成分 {min(component)}: 滞在・引き返し {backtrack_count(t)} 回")


def verify_theorem(G: Graph, k_cap: int = K_MAX, cover: Optional[Iterable[int]] = None,
                   graph_id: str = "g", cap: Optional[int] = None,
                   return_mode: str = ESCORT_RETURN_MODE) -> TheoremReport:
    """
    1つの連結グラフについて上界 c(G) ≤ ⌊2-coc(G)/3⌋ + 4 を検証する

    数学的な失敗（上界違反・検査失敗・タイムアウト）は例外にせず report に記録する。

    Raises:
        GraphError: G が連結でない
    """
    if not is_connected(G):
        raise GraphError(f"[{graph_id}] 連結グラフが必要です")
    coc2 = coc(G, 2)
    U = coc2.cover if cover is None else require_cover(G, cover, 2).cover
    trace = reduce(G, U)
    comps = component_reports(G, trace)

    report = TheoremReport(
        graph_id=graph_id, n=G.n, m=G.m, coc2=coc2.size, vcn=vcn(G).size, r=trace.r,
        u_prime=len(trace.u_prime), cop_number="", bound=coc2.size // 3 + 4,
    )
    report.checks["cover_shrink"] = trace.cover_shrink_holds()
    report.checks["short_paths"] = all(c.short_paths for c in comps)
    report.checks["diameter"] = all(c.diameter <= 7 for c in comps)

    _play_components(G, U, trace, report, cap, return_mode)

    c = cop_number(G, k_cap)
    report.cop_number = str(c)
    report.verdict = _verdict(report, c if isinstance(c, int) else None)

    failed = report.failed_checks()
    if failed:
        logger.warning(f"[{graph_id}] 失敗した検査があります: {failed} {report.notes}")
    if report.verdict == "fail":
        logger.error(f"[{graph_id}] 上界違反: c(G)={c} > 上界={report.bound}")
    else:
        logger.info(f"[{graph_id}] n={G.n} 2-coc={coc2.size} r={trace.r} c(G)={c} "
                    f"上界={report.bound} 戦略警官数={report.strategy_cops} 判定={report.verdict}")
    return report
