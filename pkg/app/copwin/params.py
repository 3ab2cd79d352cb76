#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
params.py - ℓ-component order connectivity（ℓ-coc）と頂点被覆数の厳密計算

分枝限定法: G−U に位数 ℓ+1 の連結集合が残っている限り、その ℓ+1 頂点の
どれかを U に加える分岐を行う。最小サイズのカバーのうち辞書順最小を返す。
"""

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, List, Optional, Set, Tuple

from copwin.errors import CoverError
from copwin.graph_core import Graph, VertexSet, components, vertex_set
from utils.logger import setup_logger

logger = setup_logger(__name__)


@dataclass(frozen=True)
class CocCover:
    """G − cover の全連結成分の位数が ell 以下であることが保証された頂点集合"""
    ell: int
    cover: VertexSet

    @property
    def size(self) -> int:
        return len(self.cover)

    def sorted_cover(self) -> Tuple[int, ...]:
        return tuple(sorted(self.cover))


def _check_ell(ell: int) -> None:
    if ell < 1:
        raise CoverError(f"ℓ は1以上である必要があります: {ell}")


def verify_cover(G: Graph, U: Iterable[int], ell: int) -> bool:
    """G − U の全連結成分の位数が ell 以下か"""
    removed = vertex_set(G, U)
    rest = [v for v in G.vertices if v not in removed]
    return all(len(c) <= ell for c in components(G, rest))


def find_connected_set(G: Graph, excluded: Set[int], size: int) -> Optional[Tuple[int, ...]]:
    """
    excluded を除いた部分で位数 size の連結集合を1つ探す

    位数が size 以上の最初の連結成分（最小要素順）で、最小IDの頂点から
    BFS した訪問順の先頭 size 頂点を返す。無ければ None。
    """
    rest = [v for v in G.vertices if v not in excluded]
    for comp in components(G, rest):
        if len(comp) < size:
            continue
        start = min(comp)
        order = [start]
        seen = {start}
        queue = deque([start])
        while queue and len(order) < size:
            u = queue.popleft()
            for w in G.adjacency[u]:
                if w in comp and w not in seen:
                    seen.add(w)
                    order.append(w)
                    queue.append(w)
                    if len(order) == size:
                        break
        return tuple(order)
    return None


def packing_lower_bound(G: Graph, excluded: Set[int], size: int) -> int:
    """互いに素な位数 size の連結集合を貪欲に詰めた個数（必要な追加頂点数の下界）"""
    used = set(excluded)
    count = 0
    while True:
        found = find_connected_set(G, used, size)
        if found is None:
            return count
        used.update(found)
        count += 1


def coc(G: Graph, ell: int) -> CocCover:
    """
    最小 ℓ-coc カバー（同サイズなら辞書順最小）

    Raises:
        CoverError: ell < 1
    """
    _check_ell(ell)
    size = ell + 1
    best_size = G.n
    best: List[Tuple[int, ...]] = []
    seen: Set[VertexSet] = set()
    nodes = 0

    def branch(partial: Set[int]) -> None:
        nonlocal best_size, best, nodes
        key = frozenset(partial)
        if key in seen:
            return
        seen.add(key)
        nodes += 1
        if len(partial) + packing_lower_bound(G, partial, size) > best_size:
            return
        target = find_connected_set(G, partial, size)
        if target is None:
            leaf = tuple(sorted(partial))
            if len(leaf) < best_size:
                best_size, best = len(leaf), [leaf]
            elif len(leaf) == best_size:
                best.append(leaf)
            return
        for v in target:
            partial.add(v)
            branch(partial)
            partial.remove(v)

    branch(set())
    # V 全体は常にカバーなので best は空にならない（n=0 のときは空集合）
    chosen = min(best) if best else ()
    logger.debug(f"{ell}-coc 探索完了: n={G.n} サイズ={len(chosen)} 探索ノード数={nodes}")
    return CocCover(ell=ell, cover=frozenset(chosen))


def vcn(G: Graph) -> CocCover:
    """頂点被覆数（ℓ=1 の場合）"""
    return coc(G, 1)


def brute_force_coc(G: Graph, ell: int) -> CocCover:
    """サイズ昇順・辞書順の全部分集合探索（検証用オラクル）"""
    _check_ell(ell)
    for k in range(G.n + 1):
        for subset in combinations(G.vertices, k):
            if verify_cover(G, subset, ell):
                return CocCover(ell=ell, cover=frozenset(subset))
    return CocCover(ell=ell, cover=frozenset())


def require_cover(G: Graph, U: Iterable[int], ell: int) -> CocCover:
    """
    利用者指定のカバーを検証して CocCover にする

    Raises:
        CoverError: カバーになっていない
    """
    _check_ell(ell)
    members = vertex_set(G, U)
    if not verify_cover(G, members, ell):
        raise CoverError(f"{sorted(members)} は {ell}-coc カバーではありません")
    return CocCover(ell=ell, cover=members)
