#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
reduction_engine.py - 2-coc カバー U に対する縮約規則 RR1 / RR2 / RR3 の適用

グラフ自体は変更せず「アクティブ集合」（泥棒がまだ入れる頂点）を縮めていく。
削除された頂点は警官が守っているだけで、警官は引き続き通行できる。

  RR1: v ∉ U で |N(v) ∩ U| ≥ 3 → v に警官を置き N[v] を削除
  RR2: v ∈ U で |N(v) ∩ U| ≥ 2 → v に警官を置き N[v] を削除
  RR3: U の頂点を3つ以上含む等長路 → 1人の警官で守り、路を削除
"""

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional, Tuple, Union

from copwin.errors import CoverError
from copwin.graph_core import (
    INF, Graph, Path, VertexSet, all_pairs_distances, components, diameter,
    shortest_path, vertex_set,
)
from copwin.params import verify_cover
from utils.logger import setup_logger

logger = setup_logger(__name__)


class RuleKind(str, Enum):
    RR1 = "RR1"
    RR2 = "RR2"
    RR3 = "RR3"


@dataclass(frozen=True)
class ReductionStep:
    """
    1回の縮約

    Attributes:
        anchor: RR1/RR2 では警官の位置、RR3 では守る等長路
        deleted: この縮約で削除した頂点
        u_removed: deleted ∩ U（常に3頂点以上）
        territory: 縮約直前のアクティブ集合（路の警官の影の計算に使う）
    """
    kind: RuleKind
    anchor: Union[int, Path]
    deleted: VertexSet
    u_removed: VertexSet
    territory: VertexSet

    @property
    def post(self) -> int:
        """警官の初期位置"""
        return self.anchor[0] if self.kind == RuleKind.RR3 else self.anchor


@dataclass(frozen=True)
class ReductionTrace:
    cover: VertexSet
    steps: Tuple[ReductionStep, ...]
    residual_active: VertexSet
    u_prime: VertexSet

    @property
    def r(self) -> int:
        return len(self.steps)

    def cover_shrink_holds(self) -> bool:
        """|U′| ≤ |U| − 3r かつ各縮約が U から3頂点以上取り除く"""
        return (len(self.u_prime) <= len(self.cover) - 3 * self.r
                and all(len(s.u_removed) >= 3 for s in self.steps))


@dataclass(frozen=True)
class ComponentReport:
    vertices: VertexSet
    u_prime_h: VertexSet
    diameter: int
    short_paths: bool


def _step(kind: RuleKind, anchor, deleted: Iterable[int], active: VertexSet, U: VertexSet) -> ReductionStep:
    deleted = frozenset(deleted)
    return ReductionStep(kind, anchor, deleted, deleted & U, active)


def find_rr1(G: Graph, active: VertexSet, U: VertexSet) -> Optional[ReductionStep]:
    """U の外にあって、アクティブな U の隣接頂点を3つ以上持つ最小IDの頂点"""
    for v in sorted(active - U):
        nbrs = [w for w in G.adjacency[v] if w in active]
        if sum(1 for w in nbrs if w in U) >= 3:
            return _step(RuleKind.RR1, v, nbrs + [v], active, U)
    return None


def find_rr2(G: Graph, active: VertexSet, U: VertexSet) -> Optional[ReductionStep]:
    """U 内にあって、アクティブな U の隣接頂点を2つ以上持つ最小IDの頂点"""
    for v in sorted(active & U):
        nbrs = [w for w in G.adjacency[v] if w in active]
        if sum(1 for w in nbrs if w in U) >= 2:
            return _step(RuleKind.RR2, v, nbrs + [v], active, U)
    return None


def find_u_triple(G: Graph, active: VertexSet, U: VertexSet) -> Optional[Tuple[int, int, int]]:
    """
    d(u,w) + d(w,v) = d(u,v) を満たす U の3頂点 (u, w, v)

    アクティブな誘導部分グラフでの距離を使う。u < v の辞書順で最初の対、
    その中で最小の w を返す。
    """
    members = sorted(active & U)
    if len(members) < 3:
        return None
    dist = all_pairs_distances(G, active)
    for i, u in enumerate(members):
        for v in members[i + 1:]:
            duv = dist[u, v]
            if duv >= INF:
                continue
            for w in members:
                if w in (u, v):
                    continue
                if dist[u, w] + dist[w, v] == duv:
                    return u, w, v
    return None


def find_rr3(G: Graph, active: VertexSet, U: VertexSet) -> Optional[ReductionStep]:
    """U の3頂点を通る等長路（u→w と w→v の最短路をつないだもの）"""
    triple = find_u_triple(G, active, U)
    if triple is None:
        return None
    u, w, v = triple
    path = shortest_path(G, u, w, active) + shortest_path(G, w, v, active)[1:]
    return _step(RuleKind.RR3, path, path, active, U)


def reduce(G: Graph, U: Iterable[int]) -> ReductionTrace:
    """
    RR1 > RR2 > RR3 の優先順で適用できなくなるまで縮約する

    Raises:
        CoverError: U が 2-coc カバーでない
    """
    cover = vertex_set(G, U)
    if not verify_cover(G, cover, 2):
        raise CoverError(f"{sorted(cover)} は 2-coc カバーではありません")

    active: VertexSet = frozenset(G.vertices)
    steps: List[ReductionStep] = []
    while True:
        step = find_rr1(G, active, cover) or find_rr2(G, active, cover) or find_rr3(G, active, cover)
        if step is None:
            break
        steps.append(step)
        active = active - step.deleted
        logger.debug(f"{step.kind.value} を適用: anchor={step.anchor} 削除={sorted(step.deleted)}")

    trace = ReductionTrace(cover, tuple(steps), active, active & cover)
    logger.info(f"縮約完了: r={trace.r} |U|={len(cover)} |U'|={len(trace.u_prime)} 残り頂点数={len(active)}")
    return trace


def lemma1_check(G: Graph, component: Iterable[int], u_prime_h: Iterable[int]) -> bool:
    """
    成分 H 内で U′_H の任意の2頂点が距離3以下で、内部に U′_H を含まない最短路で結ばれるか
    """
    members = frozenset(component)
    cover = sorted(frozenset(u_prime_h))
    if len(cover) <= 1:
        return True
    dist = all_pairs_distances(G, members)
    for i, a in enumerate(cover):
        for b in cover[i + 1:]:
            if dist[a, b] > 3:
                return False
            # 端点以外の U′_H を除いても同じ距離で到達できるか
            path = shortest_path(G, a, b, (members - frozenset(cover)) | {a, b})
            if path is None or len(path) - 1 != dist[a, b]:
                return False
    return True


def residual_components(trace: ReductionTrace, G: Graph) -> List[VertexSet]:
    return components(G, trace.residual_active)


def component_reports(G: Graph, trace: ReductionTrace) -> List[ComponentReport]:
    reports = []
    for comp in residual_components(trace, G):
        u_h = comp & trace.u_prime
        reports.append(ComponentReport(comp, u_h, diameter(G, comp), lemma1_check(G, comp, u_h)))
    return reports


def _fmt(members: Iterable[int]) -> str:
    return ",".join(str(v) for v in sorted(members))


def format_trace(trace: ReductionTrace) -> str:
    """1行1縮約のテキストログ"""
    lines = []
    for step in trace.steps:
        anchor = "-".join(str(v) for v in step.anchor) if step.kind == RuleKind.RR3 else str(step.anchor)
        lines.append(f"{step.kind.value} anchor={anchor} deleted={_fmt(step.deleted)} u_removed={_fmt(step.u_removed)}")
    lines.append(f"r={trace.r}")
    lines.append(f"u_prime={_fmt(trace.u_prime)}")
    lines.append(f"residual={_fmt(trace.residual_active)}")
    return "\n".join(lines) + "\n"
