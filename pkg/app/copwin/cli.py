#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
cli.py - コマンドライン

    copnumber FILE [--kmax K]
    coc FILE [--ell L]
    reduce FILE [--cover 2,5]
    verify [FILE ...] [--gen SPEC] [--seed S] [--kmax K] [--cap C] [--workers W] [--out PATH]
    simulate FILE [--cover 2,5] [--robber optimal|greedy|random:SEED] [--seed S] [--cap C] [--out PATH]

標準出力は結果（数値・トレース・CSV）だけ。ログは標準エラーへ出る。
ライブラリのエラーは1行のメッセージにして終了コード1で終わる。
"""

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path as FilePath
from typing import List, Optional, Tuple

import click

from config import COC_ELL, ESCORT_RETURN_MODE, K_MAX, ROBBER_TABLE_COPS, VERIFY_WORKERS
from copwin.corpus import generate, parse_gen_spec
from copwin.errors import (
    BudgetViolation, ContractViolation, CoverError, GraphError, IllegalMoveError,
    NoWinningPlacementError,
)
from copwin.game_solver import RobberPolicy, cop_number, solve
from copwin.graph_core import Graph, components
from copwin.graph_io import read_graph
from copwin.params import coc, require_cover
from copwin.reduction_engine import format_trace, reduce
from copwin.sim_harness import (
    REPORT_COLUMNS, GreedyRobber, RandomRobber, default_cap, format_sim_trace,
    report_row, run_game, verify_theorem,
)
from copwin.strategy import build_component_plans, compose
from utils.logger import setup_logger
from utils.memory import format_memory_info

logger = setup_logger(__name__)

LIBRARY_ERRORS = (
    GraphError, CoverError, NoWinningPlacementError, BudgetViolation,
    IllegalMoveError, ContractViolation, ValueError, OSError,
)


def _load(path: str) -> Graph:
    try:
        return read_graph(path)
    except GraphError as e:
        raise click.ClickException(f"{path}: {e}")
    except OSError as e:
        raise click.ClickException(f"{path}: ファイルを読み込めません ({e.strerror})")


def _parse_cover(text: Optional[str]) -> Optional[List[int]]:
    if text is None:
        return None
    text = text.strip().strip("{}")
    if not text:
        return []
    try:
        return [int(p) for p in text.split(",")]
    except ValueError:
        raise click.BadParameter(f"カンマ区切りの頂点IDで指定してください: '{text}'", param_hint="--cover")


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        click.echo(text, nl=False)
    else:
        FilePath(out).write_text(text, encoding="utf-8")
        logger.info(f"出力を保存しました: {out}")


@click.group()
def cli():
    """警官と泥棒ゲームの上界 c(G) ≤ ⌊2-coc(G)/3⌋ + 4 の検証ツール"""


@cli.command("copnumber")
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("--kmax", type=click.IntRange(min=1), default=K_MAX, show_default=True, help="警官数の探索上限")
def cmd_copnumber(file: str, kmax: int):
    """警官数を厳密に求める（上限までに決まらなければ unknown(K)）"""
    G = _load(file)
    click.echo(str(cop_number(G, kmax)))


@cli.command("coc")
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("--ell", type=click.IntRange(min=1), default=COC_ELL, show_default=True, help="成分の位数の上限 ℓ")
def cmd_coc(file: str, ell: int):
    """最小 ℓ-coc カバーの大きさと証拠の集合を出力する"""
    G = _load(file)
    result = coc(G, ell)
    click.echo(f"{result.size} {{{','.join(map(str, result.sorted_cover()))}}}")


@cli.command("reduce")
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("--cover", "cover_arg", default=None, help="2-coc カバー（例: 2,5）。省略時は最小カバー")
def cmd_reduce(file: str, cover_arg: Optional[str]):
    """縮約規則を適用し、1行1縮約のログを出力する"""
    G = _load(file)
    cover = _parse_cover(cover_arg)
    try:
        U = coc(G, 2).cover if cover is None else require_cover(G, cover, 2).cover
        click.echo(format_trace(reduce(G, U)), nl=False)
    except LIBRARY_ERRORS as e:
        raise click.ClickException(str(e))


def _verify_one(job: Tuple[str, Graph, int, Optional[int], str]) -> List[str]:
    graph_id, G, kmax, cap, return_mode = job
    return report_row(verify_theorem(G, kmax, graph_id=graph_id, cap=cap, return_mode=return_mode))


@cli.command("verify")
@click.argument("files", nargs=-1, type=click.Path(dir_okay=False))
@click.option("--gen", "gen_specs", multiple=True, help="生成指定 gnp:n,p,count,seed / planted:n,cover_size,count,seed")
@click.option("--seed", type=int, default=None, help="生成指定のシードを上書きする")
@click.option("--kmax", type=click.IntRange(min=1), default=K_MAX, show_default=True)
@click.option("--cap", type=click.IntRange(min=1), default=None, help="1ゲームのターン上限")
@click.option("--workers", type=click.IntRange(min=1), default=VERIFY_WORKERS, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="CSV の出力先（省略時は標準出力）")
def cmd_verify(files: Tuple[str, ...], gen_specs: Tuple[str, ...], seed: Optional[int], kmax: int,
               cap: Optional[int], workers: int, out: Optional[str]):
    """グラフごとに上界を検証し、CSV を出力する（fail が1つでもあれば終了コード1）"""
    if not files and not gen_specs:
        raise click.UsageError("FILE か --gen のどちらかを指定してください")

    graphs: List[Tuple[str, Graph]] = [(FilePath(f).stem, _load(f)) for f in files]
    for text in gen_specs:
        try:
            graphs.extend(generate(parse_gen_spec(text, seed)))
        except ValueError as e:
            raise click.BadParameter(str(e), param_hint="--gen")
    graphs.sort(key=lambda item: item[0])

    jobs = [(graph_id, G, kmax, cap, ESCORT_RETURN_MODE) for graph_id, G in graphs]
    try:
        if workers > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                rows = list(pool.map(_verify_one, jobs))
        else:
            rows = [_verify_one(job) for job in jobs]
    except LIBRARY_ERRORS as e:
        raise click.ClickException(str(e))

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(REPORT_COLUMNS)
    writer.writerows(rows)
    _emit(buffer.getvalue(), out)

    verdicts = [row[REPORT_COLUMNS.index("verdict")] for row in rows]
    logger.info(f"検証完了: {len(rows)}件 pass={verdicts.count('pass')} fail={verdicts.count('fail')} "
                f"unknown={verdicts.count('unknown')} {format_memory_info()}")
    if "fail" in verdicts:
        raise SystemExit(1)


def _make_robber(spec: str, G: Graph, table_cops: int, seed: Optional[int]):
    if spec == "optimal":
        return RobberPolicy(solve(G, table_cops))
    if spec == "greedy":
        return GreedyRobber(G)
    kind, _, value = spec.partition(":")
    if kind == "random":
        if value:
            try:
                return RandomRobber(G, int(value))
            except ValueError:
                pass
        elif seed is not None:
            return RandomRobber(G, seed)
    raise click.BadParameter(f"optimal / greedy / random:SEED のいずれかです: '{spec}'", param_hint="--robber")


@cli.command("simulate")
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("--cover", "cover_arg", default=None, help="2-coc カバー（省略時は最小カバー）")
@click.option("--robber", "robber_spec", default="optimal", show_default=True,
              help="optimal（勝敗表に基づく泥棒。警官が表より多いとヒューリスティック） / greedy / random:SEED")
@click.option("--seed", type=int, default=None, help="random のシードを省略したときに使うシード")
@click.option("--cap", type=click.IntRange(min=1), default=None, help="ターン上限")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def cmd_simulate(file: str, cover_arg: Optional[str], robber_spec: str, seed: Optional[int],
                 cap: Optional[int], out: Optional[str]):
    """合成戦略と泥棒を対戦させ、ターンごとのトレースを出力する"""
    G = _load(file)
    cover = _parse_cover(cover_arg)
    try:
        U = coc(G, 2).cover if cover is None else require_cover(G, cover, 2).cover
        trace = reduce(G, U)
        plans = build_component_plans(G, trace)
        strategy = compose(G, U, trace, None, plans)
        robber = _make_robber(robber_spec, G, min(strategy.cop_count, ROBBER_TABLE_COPS), seed)
        game_cap = cap or default_cap(G.n, max((p.k for p in plans), default=0) + 1)
        result = run_game(G, strategy, robber, game_cap, graph_id=FilePath(file).stem)
    except LIBRARY_ERRORS as e:
        raise click.ClickException(str(e))
    if len(components(G)) > 1:
        logger.warning("非連結グラフです。泥棒の初期位置によっては捕獲できません")
    _emit(format_sim_trace(result), out)
