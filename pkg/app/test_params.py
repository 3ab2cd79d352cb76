#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""params（ℓ-coc と頂点被覆数）のテスト"""

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from copwin.errors import CoverError
from copwin.graph_core import Graph
from copwin.params import (
    brute_force_coc, coc, find_connected_set, packing_lower_bound, require_cover, vcn, verify_cover,
)


def nxg(g: nx.Graph) -> Graph:
    return Graph.from_networkx(g)


@pytest.mark.parametrize("graph, ell, size", [
    (nx.path_graph(2), 2, 0),
    (nx.path_graph(3), 2, 1),
    (nx.cycle_graph(6), 2, 2),
    (nx.complete_graph(5), 2, 3),
    (nx.path_graph(3), 1, 1),
    (nx.cycle_graph(4), 1, 2),
    (nx.empty_graph(4), 1, 0),
    (nx.petersen_graph(), 1, 6),
])
def test_known_sizes(graph, ell, size):
    result = coc(nxg(graph), ell)
    assert result.size == size
    assert verify_cover(nxg(graph), result.cover, ell)


def test_path7_cover_is_lexicographically_smallest(path7):
    assert coc(path7, 2).sorted_cover() == (1, 4)


def test_vcn_of_path3():
    assert vcn(nxg(nx.path_graph(3))).cover == frozenset({1})


def test_empty_graph():
    G = Graph.build(0, [])
    assert coc(G, 2).size == 0
    assert verify_cover(G, [], 2)


def test_invalid_ell(path7):
    with pytest.raises(CoverError):
        coc(path7, 0)


def test_require_cover(path7):
    assert require_cover(path7, [2, 5], 2).size == 2
    with pytest.raises(CoverError):
        require_cover(path7, [2], 2)


def test_find_connected_set_grows_from_smallest_vertex(path7):
    assert find_connected_set(path7, {2}, 3) == (3, 4, 5)
    assert find_connected_set(path7, {2, 5}, 3) is None


def test_packing_lower_bound(path7):
    # {0,1,2} と {3,4,5} は互いに素
    assert packing_lower_bound(path7, set(), 3) == 2


@given(seed=st.integers(min_value=0, max_value=100_000),
       n=st.integers(min_value=1, max_value=9),
       ell=st.sampled_from([1, 2]))
@settings(max_examples=60, deadline=None)
def test_matches_brute_force(seed, n, ell):
    G = nxg(nx.gnp_random_graph(n, 0.4, seed=seed))
    assert coc(G, ell) == brute_force_coc(G, ell)


@given(seed=st.integers(min_value=0, max_value=100_000))
@settings(max_examples=30, deadline=None)
def test_monotone_in_ell(seed):
    G = nxg(nx.gnp_random_graph(9, 0.35, seed=seed))
    assert vcn(G).size >= coc(G, 2).size >= coc(G, 3).size
