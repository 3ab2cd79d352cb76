#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""辺リスト形式とコーパス生成のテスト"""

import networkx as nx
import pytest

from copwin.corpus import GenSpec, generate, parse_gen_spec
from copwin.errors import GraphFormatError
from copwin.graph_core import Graph, is_connected
from copwin.graph_io import parse_graph, write_graph
from copwin.params import coc


class TestParseGraph:
    def test_comments_and_blank_lines(self):
        G = parse_graph("# P3\n\n3 2\n0 1\n# 途中のコメント\n1 2\n")
        assert G == Graph.build(3, [(0, 1), (1, 2)])

    def test_write_then_parse(self, petersen):
        assert parse_graph(write_graph(petersen)) == petersen

    def test_write_format(self):
        assert write_graph(Graph.build(3, [(1, 2), (0, 1)])) == "3 2\n0 1\n1 2\n"

    @pytest.mark.parametrize("text, line_no", [
        ("3 1\n0 3\n", 2),
        ("3 1\n1 1\n", 2),
        ("3 1\n2 1\n", 2),
        ("3 2\n0 1\n0 1\n", 3),
        ("3 1\n0 x\n", 2),
        ("# c\n3\n", 2),
    ])
    def test_errors_carry_line_numbers(self, text, line_no):
        with pytest.raises(GraphFormatError) as info:
            parse_graph(text)
        assert info.value.line_no == line_no
        assert str(info.value).startswith(f"{line_no}行目: ")

    def test_edge_count_mismatch(self):
        with pytest.raises(GraphFormatError):
            parse_graph("3 2\n0 1\n")

    def test_missing_header(self):
        with pytest.raises(GraphFormatError):
            parse_graph("# empty\n")


class TestCorpus:
    def test_parse_gen_spec(self):
        spec = parse_gen_spec("gnp:10,0.3,50,7")
        assert (spec.kind, spec.n, spec.p, spec.count, spec.seed) == ("gnp", 10, 0.3, 50, 7)
        assert parse_gen_spec("planted:12,4,20,1", seed=9).seed == 9

    @pytest.mark.parametrize("text", [
        "gnp:10,0.3,50", "tree:10,1,1,1", "gnp:10,1.5,5,1", "planted:5,6,1,1", "gnp:0,0.5,1,1",
    ])
    def test_invalid_gen_spec(self, text):
        with pytest.raises(ValueError):
            parse_gen_spec(text)

    def test_deterministic_and_connected(self):
        spec = GenSpec(kind="gnp", n=10, p=0.3, count=5, seed=7)
        first, second = generate(spec), generate(spec)
        assert first == second
        assert [graph_id for graph_id, _ in first][0] == "gnp-10-0.3-7-0000"
        assert all(is_connected(G) for _, G in first)

    def test_planted_cover_bounds_coc(self):
        for _, G in generate(GenSpec(kind="planted", n=12, cover_size=4, count=8, seed=2)):
            assert is_connected(G)
            assert coc(G, 2).size <= 4

    def test_gnp_matches_networkx_size(self):
        _, G = generate(GenSpec(kind="gnp", n=6, p=1.0, count=1, seed=0))[0]
        assert G == Graph.from_networkx(nx.complete_graph(6))
