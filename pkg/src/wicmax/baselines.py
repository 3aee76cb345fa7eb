"""Comparison selectors: probability-weighted PageRank and uniform random."""

from __future__ import annotations

import dataclasses
import time

import numpy as np

from .graph import STREAM_SELECT, WicGraph, derive_rng
from .result import SeedResult


@dataclasses.dataclass
class PageRankConfig:
    damping: float = 0.85
    max_iters: int = 10_000
    tolerance: float = 1e-3
    weighted_votes: bool = False

    def __post_init__(self) -> None:
        if not 0.0 < self.damping < 1.0:
            raise ValueError("damping must lie in (0, 1)")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")


@dataclasses.dataclass
class PageRankTrace:
    scores: np.ndarray
    iterations: int
    last_delta: float
    sums: list[float]


def pagerank_scores(g: WicGraph, cfg: PageRankConfig) -> PageRankTrace:
    """Power iteration where u passes mass to v in proportion to p(u, v).

    Nodes without out-probability mass are dangling and hand their mass to
    the teleport vector, which is uniform, or proportional to node weights
    when ``cfg.weighted_votes`` is set (the start vector follows suit).
    Stops once the L1 change drops below ``tolerance`` or after ``max_iters``.
    """
    n = g.node_count
    out_mass = np.bincount(g.sources, weights=g.probs, minlength=n).astype(float)
    dangling = out_mass <= 0
    trans = np.divide(g.probs, out_mass[g.sources], out=np.zeros_like(g.probs), where=out_mass[g.sources] > 0)
    if cfg.weighted_votes and g.weights.sum() > 0:
        teleport = g.weights / g.weights.sum()
    else:
        teleport = np.full(n, 1.0 / n)
    s = teleport.copy()
    sums, delta, it = [], np.inf, 0
    while it < cfg.max_iters:
        flow = np.bincount(g.targets, weights=s[g.sources] * trans, minlength=n).astype(float)
        new = cfg.damping * flow + (cfg.damping * s[dangling].sum() + 1.0 - cfg.damping) * teleport
        delta = float(np.abs(new - s).sum())
        s = new
        it += 1
        sums.append(float(s.sum()))
        if delta < cfg.tolerance:
            break
    return PageRankTrace(s, it, delta, sums)


def pagerank_select(g: WicGraph, k: int, cfg: PageRankConfig | None = None) -> SeedResult:
    """Top-k nodes by PageRank score, smallest id first on ties."""
    if k > g.node_count:
        raise ValueError(f"k={k} exceeds node count {g.node_count}")
    cfg = cfg or PageRankConfig()
    t0 = time.perf_counter()
    scores = pagerank_scores(g, cfg).scores
    order = np.lexsort((np.arange(g.node_count), -scores))[:k]
    elapsed = time.perf_counter() - t0
    name = "pagerank-wic" if cfg.weighted_votes else "pagerank"
    return SeedResult(name, order.tolist(), scores[order].tolist(), [elapsed] * k, pretreatment_time=elapsed)


def random_select(g: WicGraph, k: int, rng_seed: int = 0) -> SeedResult:
    """k distinct nodes from a seeded permutation; smaller k gives a prefix."""
    if k > g.node_count:
        raise ValueError(f"k={k} exceeds node count {g.node_count}")
    t0 = time.perf_counter()
    seeds = derive_rng(rng_seed, STREAM_SELECT).permutation(g.node_count)[:k].tolist()
    elapsed = time.perf_counter() - t0
    return SeedResult("random", seeds, [0.0] * k, [elapsed] * k, pretreatment_time=elapsed)
