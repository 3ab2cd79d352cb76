#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
テスト共通のフィクスチャ

小さな参照グラフはすべて networkx の生成器から作り、Graph に変換して渡す。
"""

import networkx as nx
import pytest

from copwin.graph_core import Graph


def _g(nx_graph: nx.Graph) -> Graph:
    return Graph.from_networkx(nx_graph)


@pytest.fixture
def path7() -> Graph:
    return _g(nx.path_graph(7))


@pytest.fixture
def cycle4() -> Graph:
    return _g(nx.cycle_graph(4))


@pytest.fixture
def claw() -> Graph:
    """K1,3（中心 0、葉 1, 2, 3）"""
    return _g(nx.star_graph(3))


@pytest.fixture
def petersen() -> Graph:
    return _g(nx.petersen_graph())


@pytest.fixture
def double_star() -> Graph:
    """
    a=0, b=1, d=2, e=3, r=4, y=5 のダブルスター。
    U′ = {0,1,2,3} のとき外側どうしの辺は (4,5) だけ。
    """
    return Graph.build(6, [(0, 4), (1, 4), (4, 5), (2, 5), (3, 5)])


@pytest.fixture
def small_connected_graphs():
    """頂点数 1..6 の連結グラフ全部（networkx のアトラス）"""
    return [(i, _g(g)) for i, g in enumerate(nx.graph_atlas_g())
            if 1 <= g.number_of_nodes() <= 6 and nx.is_connected(g)]
