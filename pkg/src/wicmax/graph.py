"""Weighted independent cascade graphs: loading, validation and parameterization.

Graphs are stored in compressed sparse row form over dense node ids. Edges of a
source are sorted by target, so the global edge order is (source, target)
ascending; every per-edge random draw uses that order.
"""

from __future__ import annotations

import dataclasses
import hashlib
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

TRIVALENCY_PROBS = (0.001, 0.01, 0.1)

# Named sub-streams of a master seed. Values are part of the reproducibility
# contract: changing them changes every golden output.
STREAM_PROBS = 1
STREAM_WEIGHTS = 2
STREAM_SELECT = 3
STREAM_EVAL = 4


class GraphFormatError(ValueError):
    """Raised for malformed edge-list, probability or weight files."""


def derive_rng(seed: int, *stream: int) -> np.random.Generator:
    """PCG64 generator for the sub-stream ``stream`` of master ``seed``.

    The mapping is ``PCG64(SeedSequence(seed, spawn_key=stream))`` and is
    stable across platforms and numpy versions.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=stream)))


def derive_seed(seed: int, *stream: int) -> int:
    """64-bit integer seed for the sub-stream ``stream`` of master ``seed``."""
    return int(np.random.SeedSequence(seed, spawn_key=stream).generate_state(1, np.uint64)[0])


@dataclasses.dataclass(frozen=True, eq=False)
class WicGraph:
    """Directed graph with per-edge propagation probability and per-node weight."""

    node_count: int
    indptr: np.ndarray
    targets: np.ndarray
    probs: np.ndarray
    weights: np.ndarray
    labels: np.ndarray

    def __post_init__(self) -> None:
        for arr in (self.indptr, self.targets, self.probs, self.weights, self.labels):
            arr.setflags(write=False)

    @classmethod
    def from_edges(
        cls,
        node_count: int,
        edges: Iterable[tuple[int, int]],
        probs: Sequence[float] | float | None = None,
        weights: Sequence[float] | float | None = None,
        labels: Sequence[int] | None = None,
    ) -> "WicGraph":
        """Build a graph from dense-id edges.

        ``probs`` is aligned with ``edges`` (or a scalar). Self-loops are
        dropped and repeated ordered pairs keep their first occurrence.
        """
        edges = list(edges)
        if np.ndim(probs) == 0:
            p_in = np.full(len(edges), 0.0 if probs is None else float(probs))
        else:
            p_in = np.asarray(probs, dtype=float)
            if p_in.shape != (len(edges),):
                raise ValueError("probs must align with edges")
        seen: dict[tuple[int, int], float] = {}
        for (u, v), p in zip(edges, p_in):
            u, v = int(u), int(v)
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise ValueError(f"edge ({u}, {v}) out of range for {node_count} nodes")
            if u != v and (u, v) not in seen:
                seen[(u, v)] = float(p)
        pairs = sorted(seen)
        src = np.array([u for u, _ in pairs], dtype=np.int64)
        dst = np.array([v for _, v in pairs], dtype=np.int64)
        p_arr = np.array([seen[pr] for pr in pairs], dtype=float)
        indptr = np.zeros(node_count + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=node_count), out=indptr[1:])
        if np.ndim(weights) == 0:
            w = np.full(node_count, 0.0 if weights is None else float(weights))
        else:
            w = np.asarray(weights, dtype=float).copy()
        lab = np.arange(node_count, dtype=np.int64) if labels is None else np.asarray(labels, dtype=np.int64)
        g = cls(node_count, indptr, dst, p_arr.reshape(-1), w, lab.copy())
        g.validate()
        return g

    @property
    def edge_count(self) -> int:
        return int(self.targets.size)

    @cached_property
    def sources(self) -> np.ndarray:
        """Source node of every edge, aligned with ``targets``."""
        return np.repeat(np.arange(self.node_count, dtype=np.int64), np.diff(self.indptr))

    @cached_property
    def _reverse(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        order = np.lexsort((self.sources, self.targets))
        rindptr = np.zeros(self.node_count + 1, dtype=np.int64)
        np.cumsum(np.bincount(self.targets, minlength=self.node_count), out=rindptr[1:])
        return rindptr, self.sources[order], self.probs[order]

    @property
    def rindptr(self) -> np.ndarray:
        return self._reverse[0]

    @property
    def rsources(self) -> np.ndarray:
        return self._reverse[1]

    @property
    def rprobs(self) -> np.ndarray:
        return self._reverse[2]

    def out_edges(self, u: int) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = self.indptr[u], self.indptr[u + 1]
        return self.targets[lo:hi], self.probs[lo:hi]

    def in_edges(self, v: int) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = self.rindptr[v], self.rindptr[v + 1]
        return self.rsources[lo:hi], self.rprobs[lo:hi]

    @cached_property
    def adjacency(self) -> list[list[tuple[int, float]]]:
        """Per-node ``(target, prob)`` lists; the fast path for pure-Python loops."""
        t = self.targets.tolist()
        p = self.probs.tolist()
        ptr = self.indptr.tolist()
        return [list(zip(t[ptr[u]:ptr[u + 1]], p[ptr[u]:ptr[u + 1]])) for u in range(self.node_count)]

    def edges(self) -> list[tuple[int, int, float]]:
        return list(zip(self.sources.tolist(), self.targets.tolist(), self.probs.tolist()))

    def validate(self) -> None:
        if self.node_count < 1:
            raise ValueError("graph has no nodes")
        if self.indptr.shape != (self.node_count + 1,) or self.indptr[-1] != self.targets.size:
            raise ValueError("indptr inconsistent with targets")
        if self.probs.shape != self.targets.shape:
            raise ValueError("one probability per edge required")
        if self.weights.shape != (self.node_count,) or self.labels.shape != (self.node_count,):
            raise ValueError("one weight and one label per node required")
        if np.any((self.probs < 0) | (self.probs > 1)) or np.any(np.isnan(self.probs)):
            raise ValueError("edge probabilities must lie in [0, 1]")
        if np.any(self.weights < 0) or np.any(np.isnan(self.weights)):
            raise ValueError("node weights must be non-negative")
        if np.any(self.sources == self.targets):
            raise ValueError("self-loops are not allowed")
        key = self.sources * self.node_count + self.targets
        if np.any(np.diff(key) <= 0):
            raise ValueError("edges must be unique and sorted by (source, target)")

    def with_probs(self, probs: np.ndarray) -> "WicGraph":
        g = dataclasses.replace(self, probs=np.asarray(probs, dtype=float).copy())
        g.validate()
        return g

    def with_weights(self, weights: np.ndarray) -> "WicGraph":
        g = dataclasses.replace(self, weights=np.asarray(weights, dtype=float).copy())
        g.validate()
        return g

    def fingerprint(self) -> str:
        """SHA-256 of structure and probabilities (weights excluded)."""
        h = hashlib.sha256()
        h.update(np.int64(self.node_count).tobytes())
        for arr, dt in ((self.indptr, "<i8"), (self.targets, "<i8"), (self.probs, "<f8")):
            h.update(np.ascontiguousarray(arr, dtype=dt).tobytes())
        return h.hexdigest()

    @cached_property
    def _label_index(self) -> dict[int, int]:
        return {lab: i for i, lab in enumerate(self.labels.tolist())}

    def node_of(self, label: int) -> int:
        try:
            return self._label_index[int(label)]
        except KeyError:
            raise KeyError(f"unknown node label {label}") from None


def _parse_ints(tokens: list[str], path: Path, lineno: int) -> list[int]:
    try:
        vals = [int(t) for t in tokens]
    except ValueError:
        raise GraphFormatError(f"{path}:{lineno}: expected integer node labels, got {' '.join(tokens)!r}") from None
    if any(v < 0 for v in vals):
        raise GraphFormatError(f"{path}:{lineno}: node labels must be non-negative")
    return vals


def load_edge_list(path: str | Path, undirected: bool = False) -> WicGraph:
    """Read a SNAP-style whitespace edge list into an unparameterized graph.

    Labels are remapped to dense ids in ascending label order; probabilities
    and weights start at zero.
    """
    path = Path(path)
    raw: list[tuple[int, int]] = []
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            if len(tokens) != 2:
                raise GraphFormatError(f"{path}:{lineno}: expected '<u> <v>', got {line!r}")
            u, v = _parse_ints(tokens, path, lineno)
            raw.append((u, v))
            if undirected:
                raw.append((v, u))
    if not raw:
        raise GraphFormatError(f"{path}: graph is empty")
    labels = np.unique(np.array(raw, dtype=np.int64))
    lookup = {int(lab): i for i, lab in enumerate(labels)}
    edges = [(lookup[u], lookup[v]) for u, v in raw]
    return WicGraph.from_edges(len(labels), edges, labels=labels)


@dataclasses.dataclass(frozen=True)
class Trivalency:
    choices: tuple[float, ...] = TRIVALENCY_PROBS


@dataclasses.dataclass(frozen=True)
class Constant:
    p: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("constant probability must lie in [0, 1]")


@dataclasses.dataclass(frozen=True)
class FromFile:
    path: Path


@dataclasses.dataclass(frozen=True)
class Uniform:
    value: float = 1.0

    def __post_init__(self) -> None:
        if self.value < 0:
            raise ValueError("uniform weight must be non-negative")


@dataclasses.dataclass(frozen=True)
class RandomInt:
    max: int = 10

    def __post_init__(self) -> None:
        if self.max < 1:
            raise ValueError("RandomInt max must be a positive integer")


ProbScheme = Trivalency | Constant | FromFile
WeightScheme = Uniform | RandomInt | FromFile


def _read_table(path: Path, ncols: int) -> list[tuple[list[int], float, int]]:
    rows = []
    with Path(path).open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            if len(tokens) != ncols:
                raise GraphFormatError(f"{path}:{lineno}: expected {ncols} fields, got {line!r}")
            ids = _parse_ints(tokens[:-1], path, lineno)
            try:
                val = float(tokens[-1])
            except ValueError:
                raise GraphFormatError(f"{path}:{lineno}: bad number {tokens[-1]!r}") from None
            rows.append((ids, val, lineno))
    return rows


def assign_probabilities(g: WicGraph, scheme: ProbScheme, rng_seed: int = 0) -> WicGraph:
    """Return a copy of ``g`` with edge probabilities drawn per ``scheme``."""
    m = g.edge_count
    if isinstance(scheme, Trivalency):
        rng = derive_rng(rng_seed, STREAM_PROBS)
        probs = np.asarray(scheme.choices, dtype=float)[rng.integers(0, len(scheme.choices), size=m)]
    elif isinstance(scheme, Constant):
        probs = np.full(m, scheme.p)
    elif isinstance(scheme, FromFile):
        table = {}
        for (u, v), p, lineno in _read_table(scheme.path, 3):
            if not 0.0 <= p <= 1.0:
                raise GraphFormatError(f"{scheme.path}:{lineno}: probability {p} outside [0, 1]")
            table.setdefault((u, v), p)
        probs = np.empty(m)
        src_lab = g.labels[g.sources].tolist()
        dst_lab = g.labels[g.targets].tolist()
        for i, pair in enumerate(zip(src_lab, dst_lab)):
            if pair not in table:
                raise GraphFormatError(f"{scheme.path}: no probability for edge {pair[0]} {pair[1]}")
            probs[i] = table[pair]
    else:
        raise TypeError(f"unknown probability scheme {scheme!r}")
    return g.with_probs(probs)


def assign_weights(g: WicGraph, scheme: WeightScheme, rng_seed: int = 0) -> WicGraph:
    """Return a copy of ``g`` with node weights set per ``scheme``."""
    n = g.node_count
    if isinstance(scheme, Uniform):
        w = np.full(n, float(scheme.value))
    elif isinstance(scheme, RandomInt):
        w = derive_rng(rng_seed, STREAM_WEIGHTS).integers(1, scheme.max + 1, size=n).astype(float)
    elif isinstance(scheme, FromFile):
        table = {}
        for (u,), val, lineno in _read_table(scheme.path, 2):
            if val < 0:
                raise GraphFormatError(f"{scheme.path}:{lineno}: negative weight {val}")
            table.setdefault(u, val)
        w = np.empty(n)
        for i, lab in enumerate(g.labels.tolist()):
            if lab not in table:
                raise GraphFormatError(f"{scheme.path}: no weight for node {lab}")
            w[i] = table[lab]
    else:
        raise TypeError(f"unknown weight scheme {scheme!r}")
    return g.with_weights(w)


def parse_prob_scheme(text: str) -> ProbScheme:
    """Parse ``trivalency``, ``constant:<p>`` or ``file:<path>``."""
    kind, _, arg = text.partition(":")
    kind = kind.lower()
    if kind == "trivalency" and not arg:
        return Trivalency()
    if kind == "constant" and arg:
        return Constant(float(arg))
    if kind == "file" and arg:
        return FromFile(Path(arg))
    raise ValueError(f"bad probability scheme {text!r}")


def parse_weight_scheme(text: str) -> WeightScheme:
    """Parse ``uniform[:<w>]``, ``randint[:<max>]`` or ``file:<path>``."""
    kind, _, arg = text.partition(":")
    kind = kind.lower()
    if kind == "uniform":
        return Uniform(float(arg) if arg else 1.0)
    if kind == "randint":
        return RandomInt(int(arg) if arg else 10)
    if kind == "file" and arg:
        return FromFile(Path(arg))
    raise ValueError(f"bad weight scheme {text!r}")
