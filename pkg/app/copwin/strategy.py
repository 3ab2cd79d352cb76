#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
strategy.py - 縮約結果から組み立てる合成警官戦略

警官の枠（スロット）の並び:
  [縮約ごとの見張り r 人] + [エスコート C1, C2, C3（U′ ≠ ∅ のとき）] + [内側の警官]

  見張り   : RR1/RR2 は位置に留まる。RR3 は等長路上で泥棒の「影」を追う
  エスコート: C1 は泥棒の足跡を辿る。C2/C3 は泥棒が U′_H の外に出たら
              相方頂点 y のカバー隣接頂点 d, e へ向かい、戻ったら元の位置へ帰る。
              泥棒が留まれば留まり、引き返せば自分たちも直前の位置へ引き返す
  内側     : Ĥ 上で泥棒を制限したゲームの勝敗表から取り出した戦略

どの警官でも泥棒に隣接していれば、その手番で泥棒の頂点へ移動して捕獲する。
"""

from dataclasses import dataclass, replace
from enum import Enum
from itertools import permutations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from config import ESCORT_RETURN_MODE
from copwin.errors import BudgetViolation, ContractViolation, IllegalMoveError
from copwin.game_solver import CopStrategy, extract_cop_strategy, least_winning_k
from copwin.graph_core import (
    INF, Graph, Path, Subgraph, VertexSet, all_pairs_distances, bfs_distances,
    diameter, graph_without_edges, induced_subgraph, vertex_set,
)
from copwin.params import vcn
from copwin.reduction_engine import ReductionTrace, RuleKind, lemma1_check, residual_components
from utils.logger import setup_logger

logger = setup_logger(__name__)


class Role(str, Enum):
    GUARD = "GUARD"
    PATH = "PATH"
    C1 = "ESCORT-C1"
    C2 = "ESCORT-C2"
    C3 = "ESCORT-C3"
    INNER = "INNER"


class EscortMode(str, Enum):
    IDLE = "IDLE"
    RESPONDING = "RESPONDING"
    TRANSIT = "TRANSIT"


class InnerMode(str, Enum):
    RESET = "RESET"
    PLAY = "PLAY"


def next_hop(dist: np.ndarray, adjacency: Sequence[Sequence[int]], a: int, b: int) -> int:
    """a から b への辞書順最小の最短路上の次の頂点（到達不能なら留まる）"""
    if a == b or dist[a, b] >= INF:
        return a
    want = dist[a, b] - 1
    return next(w for w in adjacency[a] if dist[w, b] == want)


def build_hat_graph(H: Graph, u_prime_h: Iterable[int]) -> Graph:
    """両端とも U′_H の外にある辺を取り除いたグラフ Ĥ（頂点集合は H と同じ）"""
    cover = vertex_set(H, u_prime_h)
    outside = [(u, v) for u, v in H.sorted_edges() if u not in cover and v not in cover]
    hat = graph_without_edges(H, outside)
    assert all(u in cover or v in cover for u, v in hat.edges)
    return hat


# =============================================================================
# 成分ごとの計画
# =============================================================================
@dataclass
class ComponentPlan:
    """
    残余グラフ G′ の連結成分 H ごとの前計算（全ての合成戦略で共有）

    距離・Ĥ・内側の勝敗表は H の局所IDで持ち、外向きの操作は元グラフのIDで行う。
    """
    vertices: VertexSet
    u_prime_h: VertexSet
    sub: Subgraph
    hat: Graph
    vcn_hat: int
    inner: CopStrategy
    dist: np.ndarray
    diameter: int
    short_paths: bool

    @property
    def k(self) -> int:
        return self.inner.k

    @property
    def posts(self) -> Optional[Tuple[int, int, int]]:
        """エスコート C1, C2, C3 の初期位置（U′_H の小さい順、足りなければ巡回）"""
        cover = sorted(self.u_prime_h)
        if not cover:
            return None
        m = len(cover)
        return cover[0], cover[1 % m], cover[2 % m]

    @property
    def placement(self) -> Tuple[int, ...]:
        return tuple(self.sub.to_global(v) for v in self.inner.placement)

    def dist_h(self, a: int, b: int) -> int:
        return int(self.dist[self.sub.to_local(a), self.sub.to_local(b)])

    def toward(self, a: int, b: int) -> int:
        local = next_hop(self.dist, self.sub.graph.adjacency, self.sub.to_local(a), self.sub.to_local(b))
        return self.sub.to_global(local)

    def h_neighbors(self, v: int) -> Tuple[int, ...]:
        return tuple(self.sub.to_global(w) for w in self.sub.graph.adjacency[self.sub.to_local(v)])

    def partner(self, v: int) -> Optional[int]:
        """U′_H の外の頂点 v と同じ外側成分にいるもう一方の頂点"""
        outside = [w for w in self.h_neighbors(v) if w not in self.u_prime_h]
        return outside[0] if outside else None

    def targets(self, y: Optional[int]) -> Optional[Tuple[int, int]]:
        """相方 y のカバー隣接頂点 (d, e)。1つしか無ければ d = e"""
        if y is None:
            return None
        cover_nbrs = [w for w in self.h_neighbors(y) if w in self.u_prime_h]
        if not cover_nbrs:
            return None
        return cover_nbrs[0], cover_nbrs[-1]

    def is_hat_move(self, a: int, b: int) -> bool:
        if a == b:
            return True
        if a not in self.vertices or b not in self.vertices:
            return False
        return self.hat.has_edge(self.sub.to_local(a), self.sub.to_local(b))


def build_component_plan(G: Graph, component: Iterable[int], u_prime_h: Iterable[int]) -> ComponentPlan:
    """
    成分 H の計画を作る

    Raises:
        BudgetViolation: Ĥ 上の警官数が ⌊vcn(Ĥ)/3⌋+1 または ⌊|U′_H|/3⌋+1 を超えた
    """
    sub = induced_subgraph(G, component)
    cover = frozenset(u_prime_h)
    local_cover = sub.local_set(cover)
    hat = build_hat_graph(sub.graph, local_cover)
    vcn_hat = vcn(hat).size
    cap = len(cover) // 3 + 1
    table = least_winning_k(sub.graph, cap, hat.edges)
    if table is None:
        raise BudgetViolation(f"成分 {min(sub.labels)}: Ĥ 上で {cap} 人以下では勝てません (|U'_H|={len(cover)})")
    if table.k > vcn_hat // 3 + 1:
        raise BudgetViolation(
            f"成分 {min(sub.labels)}: c(Ĥ)={table.k} > ⌊vcn(Ĥ)/3⌋+1={vcn_hat // 3 + 1}")
    dist = all_pairs_distances(sub.graph)
    plan = ComponentPlan(
        vertices=frozenset(sub.labels),
        u_prime_h=cover,
        sub=sub,
        hat=hat,
        vcn_hat=vcn_hat,
        inner=extract_cop_strategy(table),
        dist=dist,
        diameter=diameter(sub.graph),
        short_paths=lemma1_check(G, sub.labels, cover),
    )
    logger.debug(f"成分計画: 頂点数={sub.graph.n} |U'_H|={len(cover)} vcn(Ĥ)={vcn_hat} 内側k={plan.k} 直径={plan.diameter}")
    return plan


def build_component_plans(G: Graph, trace: ReductionTrace) -> List[ComponentPlan]:
    return [build_component_plan(G, comp, comp & trace.u_prime) for comp in residual_components(trace, G)]


# =============================================================================
# 見張り
# =============================================================================
@dataclass(frozen=True)
class StaticGuard:
    post: int


@dataclass(frozen=True)
class PathGuard:
    """
    等長路の見張り。territory は縮約直前のアクティブ集合、
    start_dist はその中での path[0] からの距離。
    """
    path: Path
    territory: VertexSet
    start_dist: Tuple[int, ...]
    cop_index: int = 0
    settled: bool = False

    @property
    def cop_pos(self) -> int:
        return self.path[self.cop_index]

    def shadow_index(self, robber: int) -> Optional[int]:
        if robber not in self.territory or self.start_dist[robber] >= INF:
            return None
        return min(self.start_dist[robber], len(self.path) - 1)


def make_path_guard(G: Graph, path: Path, territory: VertexSet) -> PathGuard:
    return PathGuard(path, territory, tuple(bfs_distances(G, path[0], territory)))


def path_guard_step(g: PathGuard, robber: int) -> PathGuard:
    """影に向かって路上を1歩進む。泥棒が縄張りの外なら動かない"""
    target = g.shadow_index(robber)
    if target is None:
        return g
    index = g.cop_index + (target > g.cop_index) - (target < g.cop_index)
    return replace(g, cop_index=index, settled=(index == target))


Guard = Union[StaticGuard, PathGuard]


# =============================================================================
# エスコート（C1, C2, C3）
# =============================================================================
@dataclass(frozen=True)
class EscortState:
    """
    Attributes:
        trail: 泥棒の足跡（滞在は記録せず、1つ前の頂点へ戻ったら取り除く）
        c1_index: C1 がいる trail 上の位置（開始点へ向かっている間は None）
        targets: 応答中の C2/C3 の目標 (d, e)
        home: 泥棒がカバーへ戻ったときに C2/C3 が帰る位置
        last_robber / prev_robber: 直前と2手前に見た泥棒の位置
        prev_pair: 直前の手を指す前の C2/C3 の位置
    """
    c1: int
    c2: int
    c3: int
    trail: Tuple[int, ...]
    mode: EscortMode
    home: Tuple[int, int]
    c1_index: Optional[int] = None
    targets: Optional[Tuple[int, int]] = None
    episode_home: Optional[Tuple[int, int]] = None
    approach_steps: int = 0
    last_robber: Optional[int] = None
    prev_robber: Optional[int] = None
    prev_pair: Optional[Tuple[int, int]] = None

    @property
    def positions(self) -> Tuple[int, int, int]:
        return self.c1, self.c2, self.c3

    def mirrored_pair(self, robber: int) -> Optional[Tuple[int, int]]:
        """泥棒の滞在には滞在、引き返しには引き返しで応じたときの C2/C3 の位置"""
        if self.mode == EscortMode.TRANSIT or self.last_robber is None:
            return None
        if robber == self.last_robber:
            return self.c2, self.c3
        if robber == self.prev_robber and self.prev_robber != self.last_robber:
            return self.prev_pair
        return None


def update_trail(trail: Tuple[int, ...], robber: int) -> Tuple[int, ...]:
    if robber == trail[-1]:
        return trail
    if len(trail) >= 2 and robber == trail[-2]:
        return trail[:-1]
    return trail + (robber,)


def _is_safe(plan: ComponentPlan, pos: int, robber: int, which: int) -> bool:
    """泥棒が次に外へ出ても、目標まで距離3以内に居られるか"""
    for o in plan.h_neighbors(robber):
        if o in plan.u_prime_h:
            continue
        goal = plan.targets(plan.partner(o))
        if goal is not None and plan.dist_h(pos, goal[which]) > 3:
            return False
    return True


def _keeps_pace(plan: ComponentPlan, pair: Tuple[int, int], robber: int, targets: Tuple[int, int]) -> bool:
    """各警官と目標の距離が、泥棒と目標の距離より1以上短い（目標上なら0）か"""
    return all(plan.dist_h(pos, goal) <= max(plan.dist_h(robber, goal) - 1, 0)
               for pos, goal in zip(pair, targets))


def _return_step(plan: ComponentPlan, pos: int, home: int, robber: int, which: int) -> int:
    step = plan.toward(pos, home)
    if _is_safe(plan, step, robber, which):
        return step
    if _is_safe(plan, pos, robber, which):
        return pos
    # カバー頂点どうしの距離は3以下なので、カバー上なら常に安全
    options = [w for w in (pos,) + plan.h_neighbors(pos) if w in plan.u_prime_h]
    if options:
        return min(options, key=lambda w: (plan.dist_h(w, home), w))
    nearest = min(plan.u_prime_h, key=lambda c: (plan.dist_h(pos, c), c))
    return plan.toward(pos, nearest)


def start_escort(plan: ComponentPlan, positions: Tuple[int, int, int], robber: int, mode: EscortMode) -> EscortState:
    posts = plan.posts
    return EscortState(c1=positions[0], c2=positions[1], c3=positions[2], trail=(robber,),
                       mode=mode, home=(posts[1], posts[2]))


def escort_step(s: EscortState, plan: ComponentPlan, robber: int, G_dist: np.ndarray, G: Graph,
                return_mode: str = ESCORT_RETURN_MODE) -> EscortState:
    """
    エスコート3人の1手

    C2/C3 は泥棒の滞在・引き返しをまねる。ただしまねた位置が目標への間に合い
    （応答中）やカバー上での安全（待機中）を崩すときは通常の動きをする。

    Raises:
        ContractViolation: 泥棒が成分 H の外にいる
    """
    if robber not in plan.vertices:
        raise ContractViolation(f"泥棒 {robber} は成分の外にいます")

    def toward(a: int, b: int) -> int:
        if a in plan.vertices and b in plan.vertices:
            return plan.toward(a, b)
        return next_hop(G_dist, G.adjacency, a, b)

    trail = update_trail(s.trail, robber)

    # C1: 開始点へ最短路で向かい、その後は毎手1つずつ足跡を進む
    approach_steps = s.approach_steps
    if s.c1_index is None:
        c1 = toward(s.c1, trail[0])
        if c1 != s.c1:
            approach_steps += 1
        c1_index = 0 if c1 == trail[0] else None
    else:
        c1_index = min(s.c1_index + 1, len(trail) - 1)
        c1 = trail[c1_index]

    posts = plan.posts
    mode, home, targets, episode_home = s.mode, s.home, s.targets, s.episode_home
    c2, c3 = s.c2, s.c3
    mirror = s.mirrored_pair(robber)
    if mirror is not None and not all(v in plan.vertices for v in mirror):
        mirror = None

    if mode == EscortMode.TRANSIT and (c2, c3) == (posts[1], posts[2]):
        mode, home = EscortMode.IDLE, (posts[1], posts[2])

    if mode == EscortMode.TRANSIT:
        c2, c3 = toward(c2, posts[1]), toward(c3, posts[2])
    elif robber not in plan.u_prime_h:
        if mode != EscortMode.RESPONDING:
            mode = EscortMode.RESPONDING
            targets = plan.targets(plan.partner(robber))
            episode_home = (c2, c3) if episode_home is None or mirror is None else episode_home
            logger.debug(f"エスコート応答開始: r={robber} 目標={targets}")
        if targets is None:
            c2, c3 = mirror or (c2, c3)
        elif mirror is not None and _keeps_pace(plan, mirror, robber, targets):
            c2, c3 = mirror
        else:
            c2, c3 = plan.toward(c2, targets[0]), plan.toward(c3, targets[1])
    else:
        if mode == EscortMode.RESPONDING:
            mode, targets = EscortMode.IDLE, None
            home = episode_home if return_mode == "episode" else (posts[1], posts[2])
        if mirror is not None and _is_safe(plan, mirror[0], robber, 0) and _is_safe(plan, mirror[1], robber, 1):
            c2, c3 = mirror
        else:
            c2 = _return_step(plan, c2, home[0], robber, 0)
            c3 = _return_step(plan, c3, home[1], robber, 1)

    return replace(s, c1=c1, c2=c2, c3=c3, trail=trail, mode=mode, home=home, c1_index=c1_index,
                   targets=targets, episode_home=episode_home, approach_steps=approach_steps,
                   last_robber=robber, prev_robber=s.last_robber, prev_pair=(s.c2, s.c3))


# =============================================================================
# 合成戦略
# =============================================================================
def match_slots(G: Graph, current: Sequence[int], dest: Sequence[int]) -> Tuple[int, ...]:
    """
    目的地の多重集合を各警官に割り当てる（各警官は閉近傍内へ）

    Raises:
        IllegalMoveError: 割り当てが存在しない
    """
    for perm in permutations(dest):
        if all(b == a or G.has_edge(a, b) for a, b in zip(current, perm)):
            return tuple(perm)
    raise IllegalMoveError(f"警官 {tuple(current)} を {tuple(dest)} へ1手で動かせません")


class ComposedStrategy:
    """
    見張り・エスコート・内側の警官をまとめた1つの警官コントローラ

    placement() で初期配置、start(robber) で泥棒の初期位置を受け取り、
    以降は step(robber) が毎警官手番の全スロットの移動先を返す。
    """

    def __init__(self, G: Graph, trace: ReductionTrace, plans: List[ComponentPlan],
                 home_plan: Optional[ComponentPlan], return_mode: str = ESCORT_RETURN_MODE):
        self.G = G
        self.trace = trace
        self.plans = plans
        self.return_mode = return_mode
        self.dist = all_pairs_distances(G)
        self.plan_of: Dict[int, ComponentPlan] = {v: p for p in plans for v in p.vertices}

        self.guards: List[Guard] = []
        for step in trace.steps:
            if step.kind == RuleKind.RR3:
                self.guards.append(make_path_guard(G, step.anchor, step.territory))
            else:
                self.guards.append(StaticGuard(step.anchor))

        self.has_escort = bool(trace.u_prime)
        self.inner_slots = max((p.k for p in plans), default=0)
        self.escort_base = len(self.guards)
        self.inner_base = self.escort_base + (3 if self.has_escort else 0)
        self.cop_count = self.inner_base + self.inner_slots

        escort_plan = home_plan if home_plan is not None and home_plan.u_prime_h else \
            next((p for p in plans if p.u_prime_h), None)
        positions = [g.post if isinstance(g, StaticGuard) else g.cop_pos for g in self.guards]
        if self.has_escort:
            positions.extend(escort_plan.posts)
        if self.inner_slots:
            inner_plan = home_plan or plans[0]
            placement = inner_plan.placement
            positions.extend(placement[i] if i < len(placement) else placement[0] for i in range(self.inner_slots))
        self.positions: Tuple[int, ...] = tuple(positions)

        self.current: Optional[ComponentPlan] = None
        self.escort: Optional[EscortState] = None
        self.inner_mode = InnerMode.RESET
        self.inner_assign: Tuple[int, ...] = ()
        self.last_robber: Optional[int] = None
        self.first_approach: Optional[int] = None

    # -------------------------------------------------------------------------
    def placement(self) -> Tuple[int, ...]:
        return self.positions

    def start(self, robber: int) -> None:
        self.G.check_vertex(robber)
        self.last_robber = robber

    def roles(self) -> Tuple[str, ...]:
        labels = []
        for g in self.guards:
            if isinstance(g, StaticGuard):
                labels.append(Role.GUARD.value)
            else:
                labels.append(f"{Role.PATH.value}:{'settled' if g.settled else 'moving'}")
        if self.has_escort:
            mode = self.escort.mode.value if self.escort is not None else "HOLD"
            labels.extend(f"{role.value}:{mode}" for role in (Role.C1, Role.C2, Role.C3))
        labels.extend(f"{Role.INNER.value}:{self.inner_mode.value}" for _ in range(self.inner_slots))
        return tuple(labels)

    # -------------------------------------------------------------------------
    def _engage(self, plan: ComponentPlan, robber: int) -> None:
        """泥棒のいる成分へ担当を切り替える（エスコートは足跡をやり直す）"""
        self.current = plan
        if self.has_escort and plan.u_prime_h:
            escort_now = self.positions[self.escort_base:self.escort_base + 3]
            self.escort = start_escort(plan, escort_now, robber, EscortMode.TRANSIT)
        else:
            self.escort = None
        self.inner_mode = InnerMode.RESET
        self.inner_assign = plan.placement
        logger.debug(f"成分 {min(plan.vertices)} を担当: 泥棒={robber}")

    def _toward(self, plan: ComponentPlan, a: int, b: int) -> int:
        if a in plan.vertices and b in plan.vertices:
            return plan.toward(a, b)
        return next_hop(self.dist, self.G.adjacency, a, b)

    def _inner_step(self, plan: ComponentPlan, robber: int, new: List[int]) -> None:
        slots = list(range(self.inner_base, self.inner_base + plan.k))
        current = [self.positions[i] for i in slots]

        if self.inner_mode == InnerMode.RESET and tuple(current) == self.inner_assign:
            self.inner_mode = InnerMode.PLAY

        if self.inner_mode == InnerMode.PLAY:
            prev = self.last_robber
            if not plan.is_hat_move(prev, robber):
                # Ĥ に無い辺を使った直後は内側の警官は動かない
                return
            local_cops = [plan.sub.to_local(c) for c in current]
            local_robber = plan.sub.to_local(robber)
            if plan.inner.is_winning(local_cops, local_robber):
                dest = plan.inner.move(local_cops, local_robber)
                moved = match_slots(plan.sub.graph, local_cops, dest)
                for slot, v in zip(slots, moved):
                    new[slot] = plan.sub.to_global(v)
                return
            logger.debug(f"内側の状態が警官勝ちでないため初期配置へ戻ります: cops={current} robber={robber}")
            self.inner_mode = InnerMode.RESET
            self.inner_assign = plan.placement

        for slot, goal in zip(slots, self.inner_assign):
            new[slot] = self._toward(plan, self.positions[slot], goal)

    def step(self, robber: int) -> Tuple[int, ...]:
        """警官手番: 全スロットの移動先を返す"""
        self.G.check_vertex(robber)
        new = list(self.positions)

        for i, g in enumerate(self.guards):
            if isinstance(g, PathGuard):
                g = path_guard_step(g, robber)
                self.guards[i] = g
                new[i] = g.cop_pos

        plan = self.plan_of.get(robber)
        if plan is None:
            # 削除済み頂点の上では見張りに任せ、エスコートと内側は待機
            self.current = None
        else:
            if plan is not self.current:
                self._engage(plan, robber)
            if self.escort is not None:
                self.escort = escort_step(self.escort, plan, robber, self.dist, self.G, self.return_mode)
                if self.first_approach is None and self.escort.c1_index is not None:
                    self.first_approach = self.escort.approach_steps
                new[self.escort_base:self.escort_base + 3] = self.escort.positions
            self._inner_step(plan, robber, new)

        for i, pos in enumerate(self.positions):
            if pos == robber or self.G.has_edge(pos, robber):
                new[i] = robber
                break

        self.positions = tuple(new)
        self.last_robber = robber
        return self.positions


def compose(G: Graph, U: Iterable[int], trace: ReductionTrace, component: Optional[Iterable[int]] = None,
            plans: Optional[List[ComponentPlan]] = None,
            return_mode: str = ESCORT_RETURN_MODE) -> ComposedStrategy:
    """
    合成戦略を作る

    Args:
        component: 泥棒がいると想定する残余成分（None なら最初の成分）
        plans: 前計算済みの成分計画（None ならここで作る）

    Raises:
        BudgetViolation: 警官数が ⌊|U|/3⌋ + 4 を超えた、または成分ごとの上界を超えた
    """
    cover = vertex_set(G, U)
    if plans is None:
        plans = build_component_plans(G, trace)
    home_plan = None
    if component is not None:
        members = frozenset(component)
        home_plan = next((p for p in plans if p.vertices == members), None)
        if home_plan is None:
            raise ContractViolation(f"{sorted(members)} は残余グラフの連結成分ではありません")
    elif plans:
        home_plan = plans[0]

    strategy = ComposedStrategy(G, trace, plans, home_plan, return_mode)
    budget = len(cover) // 3 + 4
    if strategy.cop_count > budget:
        raise BudgetViolation(f"警官数 {strategy.cop_count} が上界 ⌊|U|/3⌋+4={budget} を超えました")
    logger.debug(f"合成戦略: 見張り={len(strategy.guards)} エスコート={3 if strategy.has_escort else 0} "
                 f"内側={strategy.inner_slots} 合計={strategy.cop_count}/{budget}")
    return strategy
