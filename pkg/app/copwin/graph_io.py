#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
graph_io.py - 辺リスト形式の読み書き

形式:
    # コメント行（空行も可）
    n m
    u v      ← m 行、0 ≤ u < v < n
"""

from pathlib import Path as FilePath
from typing import List, Tuple, Union

from copwin.errors import GraphError, GraphFormatError
from copwin.graph_core import Graph


def _ints(text: str, line_no: int, expected: int) -> Tuple[int, ...]:
    parts = text.split()
    if len(parts) != expected:
        raise GraphFormatError(f"{expected}個の整数が必要です: '{text}'", line_no)
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise GraphFormatError(f"整数ではありません: '{text}'", line_no) from None


def parse_graph(text: str) -> Graph:
    """
    辺リストのテキストを Graph にする

    Raises:
        GraphFormatError: 書式・範囲・自己ループ・重複・辺数の不一致（行番号付き）
    """
    header = None
    edges: List[Tuple[int, int]] = []
    seen = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            n, m = _ints(line, line_no, 2)
            if n < 0 or m < 0:
                raise GraphFormatError(f"頂点数・辺数が負です: {n} {m}", line_no)
            header = (n, m)
            continue
        u, v = _ints(line, line_no, 2)
        n = header[0]
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"頂点IDが範囲外です: {u} {v} (n={n})", line_no)
        if u == v:
            raise GraphFormatError(f"自己ループです: {u} {v}", line_no)
        if u > v:
            raise GraphFormatError(f"u < v の順で書く必要があります: {u} {v}", line_no)
        if (u, v) in seen:
            raise GraphFormatError(f"重複した辺です: {u} {v}", line_no)
        seen.add((u, v))
        edges.append((u, v))

    if header is None:
        raise GraphFormatError("ヘッダ行 'n m' がありません")
    if len(edges) != header[1]:
        raise GraphFormatError(f"辺数がヘッダ ({header[1]}) と一致しません: {len(edges)}")
    try:
        return Graph.build(header[0], edges)
    except GraphError as e:
        raise GraphFormatError(str(e)) from e


def read_graph(path: Union[str, FilePath]) -> Graph:
    return parse_graph(FilePath(path).read_text(encoding="utf-8"))


def write_graph(G: Graph) -> str:
    lines = [f"{G.n} {G.m}"]
    lines.extend(f"{u} {v}" for u, v in G.sorted_edges())
    return "\n".join(lines) + "\n"
