"""Pairwise reachability probabilities by noisy-or accumulation over simple paths.

For a source ``u`` every simple path ``u -> ... -> v`` with probability ``q``
(product of its edge probabilities) updates ``p_r(u, v) <- 1 - (1 - p_r(u, v))(1 - q)``.
The bounded variant does not extend a path whose probability would drop to
``theta`` or below, so every stored entry satisfies ``p_r > theta``.

Paths share edges, so ``p_r`` is an approximation of the true activation
probability except where each target has a single path from the source.
"""

from __future__ import annotations

import dataclasses
import enum
import struct
from concurrent.futures import ProcessPoolExecutor
from functools import cached_property
from pathlib import Path

import numpy as np

from .graph import WicGraph


class PathBudgetExceeded(RuntimeError):
    """A source has more simple paths than the configured budget."""


# A path whose probability equals theta up to float rounding (0.1**4 vs 1e-4)
# counts as reaching the threshold and is cut.
THETA_RTOL = 1e-9


def _accumulate(adjacency: list[list[tuple[int, float]]], source: int, theta: float, max_paths: int | None) -> dict[int, float]:
    cutoff = theta * (1.0 + THETA_RTOL)
    acc: dict[int, float] = {}
    on_path = {source}
    path = [source]
    stack = [(iter(adjacency[source]), 1.0)]
    paths = 0
    while stack:
        neighbors, q = stack[-1]
        for w, p in neighbors:
            if w in on_path:
                continue
            qw = q * p
            if qw <= cutoff:
                continue
            prev = acc.get(w, 0.0)
            acc[w] = prev + qw - prev * qw
            paths += 1
            if max_paths is not None and paths > max_paths:
                raise PathBudgetExceeded(f"source {source} exceeds the budget of {max_paths} simple paths")
            on_path.add(w)
            path.append(w)
            stack.append((iter(adjacency[w]), qw))
            break
        else:
            stack.pop()
            on_path.discard(path.pop())
    return acc


def gen_pr(g: WicGraph, source: int, max_paths: int | None = None) -> dict[int, float]:
    """Reachability probabilities from ``source`` over all simple paths."""
    return _accumulate(g.adjacency, source, 0.0, max_paths)


def gen_pr_bounded(g: WicGraph, source: int, theta: float, max_paths: int | None = None) -> dict[int, float]:
    """Like :func:`gen_pr` but paths with probability ``<= theta`` are cut."""
    if not 0.0 <= theta < 1.0:
        raise ValueError("theta must lie in [0, 1)")
    return _accumulate(g.adjacency, source, theta, max_paths)


@dataclasses.dataclass(frozen=True, eq=False)
class ReachStore:
    """Sparse (source, target) -> p_r table in CSR form, sorted by (source, target)."""

    node_count: int
    theta: float
    indptr: np.ndarray
    targets: np.ndarray
    probs: np.ndarray

    @classmethod
    def from_rows(cls, node_count: int, theta: float, rows: list[dict[int, float]]) -> "ReachStore":
        indptr = np.zeros(node_count + 1, dtype=np.int64)
        np.cumsum([len(r) for r in rows], out=indptr[1:])
        targets = np.fromiter((v for r in rows for v in sorted(r)), dtype=np.int64, count=int(indptr[-1]))
        probs = np.fromiter((r[v] for r in rows for v in sorted(r)), dtype=float, count=int(indptr[-1]))
        return cls(node_count, theta, indptr, targets, probs)

    def __len__(self) -> int:
        return int(self.targets.size)

    @cached_property
    def sources(self) -> np.ndarray:
        return np.repeat(np.arange(self.node_count, dtype=np.int64), np.diff(self.indptr))

    @cached_property
    def _reverse(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        order = np.lexsort((self.sources, self.targets))
        rindptr = np.zeros(self.node_count + 1, dtype=np.int64)
        np.cumsum(np.bincount(self.targets, minlength=self.node_count), out=rindptr[1:])
        return rindptr, self.sources[order], self.probs[order]

    def successors(self, u: int) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = self.indptr[u], self.indptr[u + 1]
        return self.targets[lo:hi], self.probs[lo:hi]

    def predecessors(self, v: int) -> tuple[np.ndarray, np.ndarray]:
        rindptr, rsrc, rprob = self._reverse
        lo, hi = rindptr[v], rindptr[v + 1]
        return rsrc[lo:hi], rprob[lo:hi]

    def get(self, u: int, v: int) -> float:
        tg, pr = self.successors(u)
        i = int(np.searchsorted(tg, v))
        return float(pr[i]) if i < tg.size and tg[i] == v else 0.0

    def to_dict(self) -> dict[tuple[int, int], float]:
        return dict(zip(zip(self.sources.tolist(), self.targets.tolist()), self.probs.tolist()))


def _rows_for(args):
    g, sources, theta, max_paths = args
    return [_accumulate(g.adjacency, s, theta, max_paths) for s in sources]


def build_reach_store(g: WicGraph, theta: float = 0.0, max_paths: int | None = None, workers: int = 1) -> ReachStore:
    """Run the (bounded) accumulation from every node and assemble the store.

    ``workers > 1`` splits sources across processes; shards are merged in
    source order so the result does not depend on the worker count.
    """
    if not 0.0 <= theta < 1.0:
        raise ValueError("theta must lie in [0, 1)")
    n = g.node_count
    if workers > 1 and n > 1:
        shards = np.array_split(np.arange(n), workers)
        with ProcessPoolExecutor(workers) as pool:
            parts = pool.map(_rows_for, [(g, s.tolist(), theta, max_paths) for s in shards])
            rows = [r for part in parts for r in part]
    else:
        adjacency = g.adjacency
        rows = [_accumulate(adjacency, s, theta, max_paths) for s in range(n)]
    return ReachStore.from_rows(n, theta, rows)


class TreeKind(enum.Enum):
    IVT = "ivt"
    WDT = "wdt"
    BIVT = "bivt"
    BWDT = "bwdt"

    @property
    def forward(self) -> bool:
        return self in (TreeKind.IVT, TreeKind.BIVT)


@dataclasses.dataclass(frozen=True)
class InfluenceTree:
    """Root plus its (node, p_r) entries; no parent/child topology is kept.

    Forward kinds list successors and ``value = sum p_r(root, v) * w_v``;
    backward kinds list predecessors and ``value = sum p_r(v, root) * w_root``.
    """

    root: int
    kind: TreeKind
    entries: list[tuple[int, float]]
    value: float


def build_tree(store: ReachStore, g: WicGraph, root: int, kind: TreeKind | str, weights: np.ndarray | None = None) -> InfluenceTree:
    """Materialize one tree view from the store.

    ``weights`` overrides the graph weights, e.g. with residual weights
    during selection.
    """
    kind = TreeKind(kind)
    w = g.weights if weights is None else weights
    if kind.forward:
        nodes, probs = store.successors(root)
        value = float(probs @ w[nodes])
    else:
        nodes, probs = store.predecessors(root)
        value = float(probs.sum() * w[root])
    return InfluenceTree(root, kind, list(zip(nodes.tolist(), probs.tolist())), value)


_MAGIC = b"WICREACH"
_HEADER = struct.Struct("<8sI32sdqq")
_RECORD = np.dtype([("u", "<i8"), ("v", "<i8"), ("p", "<f8")])


def cache_path(directory: str | Path, g: WicGraph, theta: float) -> Path:
    return Path(directory) / f"reach-{g.fingerprint()[:16]}-{theta.hex()}.bin"


def save_reach_store(store: ReachStore, path: str | Path, graph_hash: str) -> None:
    """Write the store as a header plus little-endian (u, v, p_r) records."""
    rec = np.empty(len(store), dtype=_RECORD)
    rec["u"], rec["v"], rec["p"] = store.sources, store.targets, store.probs
    header = _HEADER.pack(_MAGIC, 1, bytes.fromhex(graph_hash), store.theta, store.node_count, len(store))
    path = Path(path)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with tmp.open("wb") as fh:
        fh.write(header)
        fh.write(rec.tobytes())
    tmp.replace(path)


def load_reach_store(path: str | Path, graph_hash: str | None = None, theta: float | None = None) -> ReachStore:
    """Reload a cached store, checking the graph hash and theta when given."""
    data = Path(path).read_bytes()
    magic, version, ghash, th, n, count = _HEADER.unpack_from(data)
    if magic != _MAGIC or version != 1:
        raise ValueError(f"{path}: not a reachability cache")
    if graph_hash is not None and ghash != bytes.fromhex(graph_hash):
        raise ValueError(f"{path}: cache belongs to a different graph")
    if theta is not None and th != theta:
        raise ValueError(f"{path}: cache built with theta={th}, wanted {theta}")
    rec = np.frombuffer(data, dtype=_RECORD, count=count, offset=_HEADER.size)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(rec["u"], minlength=n), out=indptr[1:])
    return ReachStore(n, th, indptr, rec["v"].astype(np.int64), rec["p"].astype(float))


def cached_reach_store(g: WicGraph, theta: float, directory: str | Path | None, max_paths: int | None = None, workers: int = 1) -> ReachStore:
    if directory is None:
        return build_reach_store(g, theta, max_paths, workers)
    path = cache_path(directory, g, theta)
    fp = g.fingerprint()
    if path.exists():
        return load_reach_store(path, fp, theta)
    store = build_reach_store(g, theta, max_paths, workers)
    Path(directory).mkdir(parents=True, exist_ok=True)
    save_reach_store(store, path, fp)
    return store
