#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""コマンドラインのテスト（click の CliRunner で実行）"""

import csv
import io

import networkx as nx
import pytest
from click.testing import CliRunner

from copwin.cli import cli
from copwin.graph_core import Graph
from copwin.graph_io import write_graph
from copwin.sim_harness import REPORT_COLUMNS


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def graph_file(tmp_path):
    def make(name: str, G: Graph) -> str:
        path = tmp_path / f"{name}.txt"
        path.write_text(write_graph(G), encoding="utf-8")
        return str(path)
    return make


def test_copnumber(runner, graph_file, path7):
    result = runner.invoke(cli, ["copnumber", graph_file("p7", path7)])
    assert result.exit_code == 0
    assert result.output == "1\n"


def test_copnumber_unknown(runner, graph_file, petersen):
    result = runner.invoke(cli, ["copnumber", graph_file("petersen", petersen), "--kmax", "2"])
    assert result.exit_code == 0
    assert result.output == "unknown(2)\n"


@pytest.mark.parametrize("G, expected", [
    (Graph.build(1, []), "0 {}\n"),
    (Graph.from_networkx(nx.path_graph(3)), "1 {1}\n"),
    (Graph.from_networkx(nx.path_graph(7)), "2 {1,4}\n"),
])
def test_coc(runner, graph_file, G, expected):
    result = runner.invoke(cli, ["coc", graph_file("g", G)])
    assert result.exit_code == 0
    assert result.output == expected


def test_coc_rejects_zero_ell(runner, graph_file, path7):
    result = runner.invoke(cli, ["coc", graph_file("p7", path7), "--ell", "0"])
    assert result.exit_code == 2


def test_reduce(runner, graph_file, claw):
    result = runner.invoke(cli, ["reduce", graph_file("claw", claw), "--cover", "1,2,3"])
    assert result.exit_code == 0
    assert result.output.splitlines()[0] == "RR1 anchor=0 deleted=0,1,2,3 u_removed=1,2,3"


def test_reduce_rejects_non_cover(runner, graph_file, path7):
    result = runner.invoke(cli, ["reduce", graph_file("p7", path7), "--cover", "3"])
    assert result.exit_code == 1


def test_unreadable_file(runner, tmp_path):
    result = runner.invoke(cli, ["copnumber", str(tmp_path / "missing.txt")])
    assert result.exit_code != 0


def test_malformed_file(runner, tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("3 1\n0 0\n", encoding="utf-8")
    result = runner.invoke(cli, ["coc", str(path)])
    assert result.exit_code == 1
    assert "2行目" in result.output


def test_verify_single_vertex(runner, graph_file):
    result = runner.invoke(cli, ["verify", graph_file("k1", Graph.build(1, []))])
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert lines[0] == ",".join(REPORT_COLUMNS)
    assert lines[1] == "k1,1,0,0,0,0,0,1,4,1,0,pass"


def test_verify_generated_corpus(runner, tmp_path):
    out = tmp_path / "report.csv"
    result = runner.invoke(cli, ["verify", "--gen", "gnp:6,0.5,3,1", "--out", str(out)])
    assert result.exit_code == 0
    rows = list(csv.DictReader(io.StringIO(out.read_text(encoding="utf-8"))))
    assert len(rows) == 3
    assert [row["graph_id"] for row in rows] == sorted(row["graph_id"] for row in rows)
    assert all(row["verdict"] == "pass" for row in rows)


def test_verify_output_is_reproducible(runner, tmp_path):
    args = ["verify", "--gen", "gnp:7,0.4,4,3", "--gen", "planted:8,3,4,2", "--kmax", "3"]
    outputs = []
    for name, extra in (("first", []), ("second", []), ("parallel", ["--workers", "2"])):
        out = tmp_path / f"{name}.csv"
        result = runner.invoke(cli, args + extra + ["--out", str(out)])
        assert result.exit_code == 0, result.output
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1] == outputs[2]
    assert len(outputs[0].decode("utf-8").splitlines()) == 9


def test_verify_needs_input(runner):
    assert runner.invoke(cli, ["verify"]).exit_code == 2


def test_verify_bad_gen_spec(runner):
    assert runner.invoke(cli, ["verify", "--gen", "gnp:6"]).exit_code == 2


def test_simulate(runner, graph_file, path7):
    result = runner.invoke(cli, ["simulate", graph_file("p7", path7), "--cover", "2,5"])
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert lines[0] == "# graph=p7"
    assert lines[1].startswith("0 place cops=2,5,2,0 robber=1 roles=ESCORT-C1:HOLD")
    assert lines[-1] == "outcome=captured(1)"


def test_simulate_random_robber_is_reproducible(runner, graph_file, double_star):
    path = graph_file("star", double_star)
    args = ["simulate", path, "--cover", "0,1,2,3", "--robber", "random:5"]
    first, second = runner.invoke(cli, args), runner.invoke(cli, args)
    assert first.exit_code == 0
    assert first.output == second.output


def test_simulate_unknown_robber(runner, graph_file, path7):
    result = runner.invoke(cli, ["simulate", graph_file("p7", path7), "--robber", "sneaky"])
    assert result.exit_code == 2
