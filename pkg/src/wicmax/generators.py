"""Seeded synthetic WIC graphs for tests and desk-scale benchmarks."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import numpy as np

from .graph import WicGraph


def random_digraph(n: int, m: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    """m distinct directed edges without self-loops, uniformly at random."""
    if m > n * (n - 1):
        raise ValueError(f"a simple digraph on {n} nodes has at most {n * (n - 1)} edges")
    if m > n * (n - 1) // 2:
        pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
        idx = rng.choice(len(pairs), size=m, replace=False)
        return [pairs[i] for i in sorted(idx)]
    chosen: set[tuple[int, int]] = set()
    while len(chosen) < m:
        need = m - len(chosen)
        u = rng.integers(0, n, size=2 * need + 8)
        v = rng.integers(0, n, size=2 * need + 8)
        for a, b in zip(u.tolist(), v.tolist()):
            if a != b and len(chosen) < m:
                chosen.add((a, b))
    return sorted(chosen)


def random_wic_graph(
    n: int,
    m: int,
    rng: np.random.Generator,
    prob_choices: Sequence[float] | None = None,
    weight_max: int | None = 10,
) -> WicGraph:
    """Random graph with probabilities from ``prob_choices`` (default 0.1..0.9)
    and integer weights in 1..weight_max (all 1 when ``weight_max`` is None)."""
    choices = np.round(np.arange(1, 10) / 10, 1) if prob_choices is None else np.asarray(prob_choices, dtype=float)
    edges = random_digraph(n, m, rng)
    probs = choices[rng.integers(0, choices.size, size=len(edges))]
    weights = np.ones(n) if weight_max is None else rng.integers(1, weight_max + 1, size=n).astype(float)
    return WicGraph.from_edges(n, edges, probs, weights)


def small_corpus(count: int = 50, seed: int = 2016, max_nodes: int = 6, max_edges: int = 10) -> list[WicGraph]:
    """The random test corpus: 2..max_nodes nodes, at most max_edges edges."""
    rng = np.random.default_rng(seed)
    graphs = []
    for _ in range(count):
        n = int(rng.integers(2, max_nodes + 1))
        m = int(rng.integers(1, min(max_edges, n * (n - 1)) + 1))
        graphs.append(random_wic_graph(n, m, rng))
    return graphs


def write_edge_list(path: str | Path, g_or_edges, header: str | None = None) -> None:
    if isinstance(g_or_edges, WicGraph):
        lab = g_or_edges.labels
        edges = [(lab[u], lab[v]) for u, v, _ in g_or_edges.edges()]
    else:
        edges = g_or_edges
    with Path(path).open("w", encoding="utf-8") as fh:
        if header:
            fh.write(f"# {header}\n")
        for e in edges:
            fh.write(f"{e[0]}\t{e[1]}\n")
