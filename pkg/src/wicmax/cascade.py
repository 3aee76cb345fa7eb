"""Ground-truth diffusion: single cascades, Monte Carlo spread and an exact oracle.

Random coins
------------
Every edge attempt in repetition ``r`` of a simulation seeded with ``s`` uses
the uniform ``U(s, r, e) = mix64(mix64(key(s) + (r+1)*G) + (e+1)*H) >> 11 / 2**53``
where ``mix64`` is the SplitMix64 finalizer and ``e`` is the edge's position
in (source, target) order. An edge is attempted at most once per cascade, so
this is a faithful cascade coin, and the coins of a repetition depend only on
``(s, r)``: repetitions can be replayed one at a time with :func:`run_cascade`,
evaluated in any chunking or thread layout with identical results, and two
seed sets evaluated under the same ``s`` share their random worlds (common
random numbers).
"""

from __future__ import annotations

import dataclasses
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable

import numpy as np

from .graph import WicGraph

EXACT_EDGE_LIMIT = 25
CHUNK_REPS = 4096

_U64 = np.uint64
_G = _U64(0x9E3779B97F4A7C15)
_H = _U64(0xD1B54A32D192ED03)
_MASK64 = (1 << 64) - 1


def _mix64(x: np.ndarray) -> np.ndarray:
    x = (x ^ (x >> _U64(30))) * _U64(0xBF58476D1CE4E5B9)
    x = (x ^ (x >> _U64(27))) * _U64(0x94D049BB133111EB)
    return x ^ (x >> _U64(31))


class EdgeCoins:
    """Counter-based uniforms indexed by (repetition, edge) for one master seed."""

    def __init__(self, seed: int):
        self.seed = seed
        self._key = _mix64(np.array([seed & _MASK64], dtype=np.uint64))[0]

    def rep_keys(self, reps: np.ndarray) -> np.ndarray:
        reps = np.asarray(reps, dtype=np.uint64)
        with np.errstate(over="ignore"):
            return _mix64(self._key + (reps + _U64(1)) * _G)

    def uniforms(self, rep_keys: np.ndarray, edges: np.ndarray) -> np.ndarray:
        with np.errstate(over="ignore"):
            h = _mix64(rep_keys + (np.asarray(edges, dtype=np.uint64) + _U64(1)) * _H)
        return (h >> _U64(11)).astype(np.float64) * (1.0 / 9007199254740992.0)

    def repetition(self, rep: int) -> "RepetitionCoins":
        return RepetitionCoins(self, rep)


@dataclasses.dataclass
class RepetitionCoins:
    """The coin stream of a single repetition, for replaying it with run_cascade."""

    coins: EdgeCoins
    rep: int

    def edge_uniform(self, edge: int) -> float:
        key = self.coins.rep_keys(np.array([self.rep]))
        return float(self.coins.uniforms(key, np.array([edge]))[0])


@dataclasses.dataclass
class CascadeOutcome:
    activated: set[int]
    value: float


@dataclasses.dataclass
class SpreadEstimate:
    mean: float
    std_error: float
    repetitions: int
    mean_activated: float = 0.0


def _check_seeds(g: WicGraph, seeds: Iterable[int]) -> list[int]:
    out = sorted({int(s) for s in seeds})
    for s in out:
        if not 0 <= s < g.node_count:
            raise ValueError(f"seed {s} out of range for {g.node_count} nodes")
    return out


def run_cascade(g: WicGraph, seeds: Iterable[int], rng: np.random.Generator | RepetitionCoins) -> CascadeOutcome:
    """Simulate one independent cascade from ``seeds``.

    Nodes activated in a round try each out-edge once, in ascending node id
    order, and the process stops after a round that activates nothing.
    ``rng`` is either a numpy Generator (one ``random()`` call per attempt)
    or a :class:`RepetitionCoins` that reproduces one Monte Carlo repetition.
    """
    seeds = _check_seeds(g, seeds)
    if isinstance(rng, RepetitionCoins):
        draw = rng.edge_uniform
    else:
        draw = lambda _edge: rng.random()  # noqa: E731
    active = set(seeds)
    frontier = seeds
    indptr = g.indptr
    while frontier:
        newly: list[int] = []
        for u in frontier:
            lo = int(indptr[u])
            for i, (v, p) in enumerate(g.adjacency[u]):
                if v in active:
                    continue
                if draw(lo + i) < p:
                    active.add(v)
                    newly.append(v)
        frontier = sorted(newly)
    value = float(sum(g.weights[v] for v in active))
    return CascadeOutcome(active, value)


def _simulate_chunk(g: WicGraph, seeds: list[int], coins: EdgeCoins, rep_lo: int, rep_hi: int):
    # activated (repetition, node) pairs are kept as sorted keys r * n + v
    n = g.node_count
    reps = rep_hi - rep_lo
    if not seeds:
        return np.zeros(reps), np.zeros(reps, dtype=np.int64)
    keys = coins.rep_keys(np.arange(rep_lo, rep_hi))
    seed_arr = np.asarray(seeds, dtype=np.int64)
    visited = (np.arange(reps, dtype=np.int64)[:, None] * n + seed_arr).ravel()
    rows, nodes = visited // n, visited % n
    while rows.size:
        starts = g.indptr[nodes]
        cnt = g.indptr[nodes + 1] - starts
        total = int(cnt.sum())
        if total == 0:
            break
        edge = np.repeat(starts - np.cumsum(cnt) + cnt, cnt) + np.arange(total)
        rr = np.repeat(rows, cnt)
        cand = rr * n + g.targets[edge]
        pos = np.minimum(np.searchsorted(visited, cand), visited.size - 1)
        pending = visited[pos] != cand
        rr, edge, cand = rr[pending], edge[pending], cand[pending]
        hit = coins.uniforms(keys[rr], edge) < g.probs[edge]
        fresh = np.unique(cand[hit])
        visited = np.union1d(visited, fresh)
        rows, nodes = fresh // n, fresh % n
    r_idx = visited // n
    values = np.bincount(r_idx, weights=g.weights[visited % n], minlength=reps)
    counts = np.bincount(r_idx, minlength=reps)
    return values, counts


def spread_samples(
    g: WicGraph, seeds: Iterable[int], R: int, rng_seed: int, threads: int = 1
) -> tuple[np.ndarray, np.ndarray]:
    """Per-repetition (value, activated count) for repetitions ``0..R-1``."""
    if R < 1:
        raise ValueError("R must be at least 1")
    seeds = _check_seeds(g, seeds)
    coins = EdgeCoins(rng_seed)
    bounds = [(lo, min(R, lo + CHUNK_REPS)) for lo in range(0, R, CHUNK_REPS)]
    job = lambda b: _simulate_chunk(g, seeds, coins, *b)  # noqa: E731
    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(job, bounds))
    else:
        parts = [job(b) for b in bounds]
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


def estimate_sigma(g: WicGraph, seeds: Iterable[int], R: int, rng_seed: int, threads: int = 1) -> SpreadEstimate:
    """Monte Carlo estimate of the expected activated weight of ``seeds``."""
    values, counts = spread_samples(g, seeds, R, rng_seed, threads)
    se = float(values.std(ddof=1) / math.sqrt(R)) if R > 1 else 0.0
    return SpreadEstimate(float(values.mean()), se, R, float(counts.mean()))


def exact_activation_probabilities(g: WicGraph, seeds: Iterable[int]) -> np.ndarray:
    """Exact per-node activation probability by enumerating live-edge subgraphs."""
    seeds = _check_seeds(g, seeds)
    m, n = g.edge_count, g.node_count
    if m > EXACT_EDGE_LIMIT:
        raise ValueError(f"exact enumeration supports at most {EXACT_EDGE_LIMIT} edges, graph has {m}")
    prob_active = np.zeros(n)
    if not seeds:
        return prob_active
    src, dst, p = g.sources.tolist(), g.targets.tolist(), g.probs
    bits = np.arange(m, dtype=np.int64)
    total = 1 << m
    step = min(total, 1 << 14)
    for lo in range(0, total, step):
        masks = np.arange(lo, min(total, lo + step), dtype=np.int64)
        live = ((masks[:, None] >> bits) & 1).astype(bool)
        weight = np.prod(np.where(live, p, 1.0 - p), axis=1)
        reached = np.zeros((masks.size, n), dtype=bool)
        reached[:, seeds] = True
        for _ in range(n):
            before = reached.sum()
            for e in range(m):
                reached[:, dst[e]] |= reached[:, src[e]] & live[:, e]
            if reached.sum() == before:
                break
        prob_active += weight @ reached
    return prob_active


def exact_sigma(g: WicGraph, seeds: Iterable[int]) -> float:
    """Exact expected activated weight; refuses graphs over EXACT_EDGE_LIMIT edges."""
    return float(exact_activation_probabilities(g, seeds) @ g.weights)


def brute_force_optimum(g: WicGraph, k: int, oracle=None) -> tuple[tuple[int, ...], float]:
    """Best k-subset under ``oracle`` (default exact_sigma), smallest ids on ties."""
    oracle = oracle or (lambda s: exact_sigma(g, s))
    best, best_val = (), -math.inf
    for combo in itertools.combinations(range(g.node_count), k):
        val = oracle(combo)
        if val > best_val:
            best, best_val = combo, val
    return best, best_val
