#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
corpus.py - シード付きのグラフコーパス生成

  gnp:n,p,count,seed            G(n, p) のうち連結なものだけを count 個
  planted:n,cover_size,count,seed  大きさ cover_size の 2-coc カバーを埋め込んだグラフ

同じ指定からは常に同じグラフ列が得られる。
"""

import random
from typing import List, Literal, Optional, Tuple

import networkx as nx
from pydantic import BaseModel, Field, ValidationError, model_validator

from config import CORPUS_MAX_N
from copwin.graph_core import Graph
from utils.logger import setup_logger

logger = setup_logger(__name__)

# 連結なグラフが得られるまでの試行回数の上限（1個あたり）
MAX_ATTEMPTS_PER_GRAPH = 1000

# 埋め込みカバーの生成で使う辺の確率
PLANTED_ATTACH_P = 0.3
PLANTED_COVER_P = 0.3


class GenSpec(BaseModel):
    kind: Literal["gnp", "planted"]
    n: int = Field(ge=1, le=CORPUS_MAX_N)
    count: int = Field(ge=1)
    seed: int
    p: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    cover_size: Optional[int] = Field(default=None, ge=0)

    @model_validator(mode="after")
    def check_kind_fields(self) -> "GenSpec":
        if self.kind == "gnp" and self.p is None:
            raise ValueError("gnp には確率 p が必要です")
        if self.kind == "planted":
            if self.cover_size is None or self.cover_size > self.n:
                raise ValueError("planted の cover_size は 0..n で指定してください")
            if self.cover_size == 0 and self.n > 2:
                raise ValueError("cover_size=0 で連結になるのは n ≤ 2 のときだけです")
        return self


def parse_gen_spec(text: str, seed: Optional[int] = None) -> GenSpec:
    """
    "gnp:10,0.3,50,7" / "planted:12,4,20,1" を解析する

    Args:
        seed: 指定された場合は文字列中のシードを上書きする

    Raises:
        ValueError: 書式または値が不正
    """
    kind, _, rest = text.partition(":")
    parts = [p.strip() for p in rest.split(",")] if rest else []
    if kind not in ("gnp", "planted") or len(parts) != 4:
        raise ValueError(f"生成指定の書式が不正です: '{text}' (例: gnp:10,0.3,50,7 / planted:12,4,20,1)")
    fields = {"kind": kind, "n": parts[0], "count": parts[2], "seed": parts[3]}
    fields["p" if kind == "gnp" else "cover_size"] = parts[1]
    if seed is not None:
        fields["seed"] = seed
    try:
        return GenSpec(**fields)
    except ValidationError as e:
        raise ValueError(f"生成指定 '{text}' が不正です: {e.errors()[0]['msg']}") from None


def _gnp(spec: GenSpec, rng: random.Random) -> nx.Graph:
    return nx.gnp_random_graph(spec.n, spec.p, seed=rng.randrange(2 ** 32))


def _planted(spec: GenSpec, rng: random.Random) -> nx.Graph:
    """
    カバー U を選び、残りを位数 1〜2 の成分に分けて U へ辺を張り、
    最後に U 内部の辺を加える。G − U の成分は常に位数2以下。
    """
    g = nx.Graph()
    g.add_nodes_from(range(spec.n))
    cover = sorted(rng.sample(range(spec.n), spec.cover_size))
    rest = [v for v in range(spec.n) if v not in set(cover)]
    rng.shuffle(rest)

    groups: List[List[int]] = []
    while rest:
        size = 2 if len(rest) >= 2 and rng.random() < 0.5 else 1
        groups.append(rest[:size])
        rest = rest[size:]

    for group in groups:
        if len(group) == 2:
            g.add_edge(group[0], group[1])
        if cover:
            g.add_edge(rng.choice(group), rng.choice(cover))
            for v in group:
                for u in cover:
                    if rng.random() < PLANTED_ATTACH_P:
                        g.add_edge(u, v)

    for i, u in enumerate(cover):
        for w in cover[i + 1:]:
            if rng.random() < PLANTED_COVER_P:
                g.add_edge(u, w)
    return g


def generate(spec: GenSpec) -> List[Tuple[str, Graph]]:
    """
    連結なグラフを count 個生成する（graph_id はゼロ埋めの通し番号付き）

    Raises:
        ValueError: 試行回数の上限までに連結なグラフが集まらない
    """
    rng = random.Random(spec.seed)
    make = _gnp if spec.kind == "gnp" else _planted
    param = spec.p if spec.kind == "gnp" else spec.cover_size
    result: List[Tuple[str, Graph]] = []
    attempts = 0
    while len(result) < spec.count:
        attempts += 1
        if attempts > MAX_ATTEMPTS_PER_GRAPH * spec.count:
            raise ValueError(f"連結なグラフが十分に得られません: {spec.kind} n={spec.n} param={param}")
        g = make(spec, rng)
        if nx.is_connected(g):
            graph_id = f"{spec.kind}-{spec.n}-{param}-{spec.seed}-{len(result):04d}"
            result.append((graph_id, Graph.from_networkx(g)))
    logger.info(f"コーパス生成: {spec.kind} n={spec.n} {spec.count}個 (試行 {attempts} 回)")
    return result
