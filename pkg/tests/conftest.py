from __future__ import annotations

import numpy as np
import pytest

from wicmax.generators import small_corpus
from wicmax.graph import WicGraph


def make_graph(n, edges, weights=None):
    """edges: iterable of (u, v, p); weights default to 1."""
    edges = list(edges)
    return WicGraph.from_edges(
        n,
        [(u, v) for u, v, _ in edges],
        np.array([p for _, _, p in edges], dtype=float),
        np.ones(n) if weights is None else np.asarray(weights, dtype=float),
    )


def path_oracle(g, source):
    """Noisy-or over every simple path, collected recursively."""
    out_edges = {}
    for u, v, p in g.edges():
        out_edges.setdefault(u, []).append((v, p))
    path_probs = {}

    def walk(u, seen, q):
        for v, p in out_edges.get(u, []):
            if v not in seen:
                path_probs.setdefault(v, []).append(q * p)
                walk(v, seen | {v}, q * p)

    walk(source, {source}, 1.0)
    return {v: 1.0 - np.prod([1.0 - q for q in qs]) for v, qs in path_probs.items()}


@pytest.fixture
def two_path():
    # u=0, v=1, w=2: u->v, u->w, w->v, all 0.5
    return make_graph(3, [(0, 1, 0.5), (0, 2, 0.5), (2, 1, 0.5)], [1, 1, 1])


@pytest.fixture
def hub_and_millionaire():
    # hub A=0 reaches 1..3 deterministically; E=4 is isolated with weight 100
    return make_graph(5, [(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)], [1, 1, 1, 1, 100])


@pytest.fixture(scope="session")
def corpus():
    return small_corpus(50)
