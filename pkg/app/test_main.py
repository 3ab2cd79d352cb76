#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""エントリーポイント main() の終了コードのテスト"""

import pytest

import copwin.cli
import main
from copwin.graph_core import Graph
from copwin.graph_io import write_graph


@pytest.fixture
def k1_file(tmp_path):
    path = tmp_path / "k1.txt"
    path.write_text(write_graph(Graph.build(1, [])), encoding="utf-8")
    return str(path)


def test_success(k1_file, capsys):
    assert main.main(["copnumber", k1_file]) == 0
    assert capsys.readouterr().out.strip() == "1"


def test_keyboard_interrupt(monkeypatch, k1_file):
    def interrupted(G, k_max):
        raise KeyboardInterrupt

    monkeypatch.setattr(copwin.cli, "cop_number", interrupted)
    assert main.main(["copnumber", k1_file]) == 130


def test_library_error_is_shown(tmp_path, capsys):
    assert main.main(["copnumber", str(tmp_path / "missing.txt")]) == 1
    assert "Error:" in capsys.readouterr().err


def test_usage_error():
    assert main.main(["verify"]) == 2


def test_unexpected_error(monkeypatch, k1_file):
    def broken(G, k_max):
        raise RuntimeError("boom")

    monkeypatch.setattr(copwin.cli, "cop_number", broken)
    assert main.main(["copnumber", k1_file]) == 1
