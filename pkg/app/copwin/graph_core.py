#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
graph_core.py - 不変な単純無向グラフと距離・近傍・連結成分の基本操作

頂点は 0..n-1 の密な整数ID。隣接リストは常に昇順で保持し、
後段のタイブレーク（最小ID優先）がすべて再現可能になるようにする。
"""

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from copwin.errors import GraphError

# 到達不能を表す距離（和を取っても int64 で溢れない大きさ）
INF = 10 ** 9

VertexSet = FrozenSet[int]
Path = Tuple[int, ...]
Edge = Tuple[int, int]


def _edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class Graph:
    """
    不変な単純無向グラフ

    Attributes:
        n: 頂点数
        edges: 正規化済みの辺集合 (u < v)
        adjacency: 頂点ごとの昇順隣接タプル
    """

    __slots__ = ("n", "edges", "adjacency")

    def __init__(self, n: int, edges: FrozenSet[Edge], adjacency: Tuple[Tuple[int, ...], ...]):
        self.n = n
        self.edges = edges
        self.adjacency = adjacency

    @classmethod
    def build(cls, n: int, edge_list: Iterable[Sequence[int]]) -> "Graph":
        """
        辺リストからグラフを構築

        Raises:
            GraphError: 範囲外ID・自己ループ・重複辺
        """
        if n < 0:
            raise GraphError(f"頂点数が負です: {n}")
        seen = set()
        neighbors: List[List[int]] = [[] for _ in range(n)]
        for pair in edge_list:
            u, v = int(pair[0]), int(pair[1])
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"頂点IDが範囲外です: ({u}, {v}) n={n}")
            if u == v:
                raise GraphError(f"自己ループは使用できません: ({u}, {v})")
            e = _edge(u, v)
            if e in seen:
                raise GraphError(f"重複した辺です: {e}")
            seen.add(e)
            neighbors[u].append(v)
            neighbors[v].append(u)
        adjacency = tuple(tuple(sorted(ns)) for ns in neighbors)
        return cls(n, frozenset(seen), adjacency)

    @classmethod
    def from_networkx(cls, g: nx.Graph) -> "Graph":
        """networkx グラフを変換（ノードはソート順で 0..n-1 に振り直す）"""
        order = sorted(g.nodes())
        index = {node: i for i, node in enumerate(order)}
        return cls.build(len(order), [(index[u], index[v]) for u, v in g.edges() if u != v])

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(sorted(self.edges))
        return g

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> range:
        return range(self.n)

    def neighbors(self, v: int) -> Tuple[int, ...]:
        self.check_vertex(v)
        return self.adjacency[v]

    def has_edge(self, u: int, v: int) -> bool:
        return _edge(u, v) in self.edges

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def check_vertex(self, v: int) -> None:
        if not (0 <= v < self.n):
            raise GraphError(f"頂点IDが範囲外です: {v} (n={self.n})")

    def sorted_edges(self) -> List[Edge]:
        return sorted(self.edges)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class Subgraph:
    """
    誘導部分グラフ: 局所ID 0..k-1 のグラフと、各局所頂点の元グラフでのID
    """
    graph: Graph
    labels: Tuple[int, ...]
    _index: Dict[int, int] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        self._index.update({g: i for i, g in enumerate(self.labels)})

    def to_local(self, v: int) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise GraphError(f"頂点 {v} は部分グラフに含まれません") from None

    def to_global(self, v: int) -> int:
        return self.labels[v]

    def local_set(self, members: Iterable[int]) -> VertexSet:
        return frozenset(self.to_local(v) for v in members)

    def global_set(self, members: Iterable[int]) -> VertexSet:
        return frozenset(self.labels[v] for v in members)


def vertex_set(G: Graph, members: Iterable[int]) -> VertexSet:
    """頂点集合を検証して frozenset にする"""
    result = frozenset(int(v) for v in members)
    for v in result:
        G.check_vertex(v)
    return result


def closed_neighborhood(G: Graph, v: int) -> VertexSet:
    """N[v] = N(v) ∪ {v}"""
    return frozenset(G.neighbors(v)) | {v}


def open_neighborhood(G: Graph, v: int) -> VertexSet:
    return frozenset(G.neighbors(v))


def components(G: Graph, restrict: Optional[Iterable[int]] = None) -> List[VertexSet]:
    """
    restrict の誘導部分グラフの連結成分（最小要素の昇順）

    Args:
        restrict: 対象の頂点集合。None なら全頂点
    """
    allowed = set(G.vertices) if restrict is None else set(vertex_set(G, restrict))
    result: List[VertexSet] = []
    seen = set()
    for start in sorted(allowed):
        if start in seen:
            continue
        seen.add(start)
        comp = [start]
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in G.adjacency[u]:
                if w in allowed and w not in seen:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        result.append(frozenset(comp))
    return result


def bfs_distances(G: Graph, source: int, allowed: Optional[Iterable[int]] = None) -> List[int]:
    """
    source からの BFS 距離（到達不能は INF）

    allowed を指定した場合はその誘導部分グラフ内の距離。source 自身は常に含む。
    """
    G.check_vertex(source)
    allowed_set = None if allowed is None else set(allowed) | {source}
    dist = [INF] * G.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in G.adjacency[u]:
            if dist[w] == INF and (allowed_set is None or w in allowed_set):
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def all_pairs_distances(G: Graph, allowed: Optional[Iterable[int]] = None) -> np.ndarray:
    """
    全点対距離行列（int64, 到達不能は INF）

    allowed を指定した場合、行・列ともに allowed 外の頂点は自分自身以外 INF。
    """
    matrix = np.full((G.n, G.n), INF, dtype=np.int64)
    sources = G.vertices if allowed is None else sorted(set(allowed))
    allowed_list = None if allowed is None else list(sources)
    for s in sources:
        matrix[s, :] = bfs_distances(G, s, allowed_list)
    for v in G.vertices:
        matrix[v, v] = 0
    return matrix


def shortest_path(G: Graph, u: int, v: int, allowed: Optional[Iterable[int]] = None) -> Optional[Path]:
    """
    u から v への最短路のうち辞書順最小のもの（到達不能なら None）

    v からの距離を求め、u から「距離が1減る最小IDの隣接頂点」を辿る。
    """
    G.check_vertex(u)
    allowed_list = None if allowed is None else set(allowed) | {u, v}
    dist = bfs_distances(G, v, allowed_list)
    if dist[u] == INF:
        return None
    path = [u]
    cur = u
    while cur != v:
        cur = next(w for w in G.adjacency[cur]
                   if dist[w] == dist[cur] - 1 and (allowed_list is None or w in allowed_list))
        path.append(cur)
    return tuple(path)


def validate_path(G: Graph, p: Sequence[int]) -> Path:
    """
    Raises:
        GraphError: 空・隣接していない連続頂点・頂点の重複
    """
    if len(p) == 0:
        raise GraphError("空のパスです")
    for v in p:
        G.check_vertex(v)
    if len(set(p)) != len(p):
        raise GraphError(f"パスに重複した頂点があります: {tuple(p)}")
    for a, b in zip(p, p[1:]):
        if not G.has_edge(a, b):
            raise GraphError(f"パス上の連続頂点 {a}, {b} は隣接していません")
    return tuple(p)


def is_isometric(G: Graph, p: Sequence[int], allowed: Optional[Iterable[int]] = None) -> bool:
    """パス長が端点間の距離と一致するか"""
    path = validate_path(G, p)
    dist = bfs_distances(G, path[0], allowed)
    return dist[path[-1]] == len(path) - 1


def is_connected(G: Graph) -> bool:
    return G.n <= 1 or len(components(G)) == 1


def diameter(G: Graph, allowed: Optional[Iterable[int]] = None) -> int:
    """直径（非連結なら INF、空グラフは 0）"""
    members = sorted(G.vertices if allowed is None else set(allowed))
    if not members:
        return 0
    matrix = all_pairs_distances(G, None if allowed is None else members)
    return int(matrix[np.ix_(members, members)].max())


def induced_subgraph(G: Graph, members: Iterable[int]) -> Subgraph:
    labels = tuple(sorted(vertex_set(G, members)))
    index = {g: i for i, g in enumerate(labels)}
    local_edges = [(index[u], index[v]) for u, v in G.sorted_edges() if u in index and v in index]
    return Subgraph(Graph.build(len(labels), local_edges), labels)


def graph_without_edges(G: Graph, removed: Iterable[Edge]) -> Graph:
    """同じ頂点集合で、指定した辺だけを取り除いたグラフ"""
    drop = {_edge(u, v) for u, v in removed}
    return Graph.build(G.n, [e for e in G.sorted_edges() if e not in drop])
