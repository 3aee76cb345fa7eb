"""Experiment harness: k-sweeps, theta sweeps and IC-vs-WIC comparisons.

Result files hold only deterministic columns, so identical configurations
give byte-identical files. Wall-clock timings go to a sidecar file next to
the result (``<name>.timings.csv``).
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import logging
import os
import tempfile
import time
from pathlib import Path
from typing import Sequence

from .baselines import PageRankConfig, pagerank_select, random_select
from .cascade import estimate_sigma
from .graph import (
    STREAM_EVAL,
    ProbScheme,
    RandomInt,
    Trivalency,
    Uniform,
    WeightScheme,
    WicGraph,
    assign_probabilities,
    assign_weights,
    derive_seed,
    load_edge_list,
)
from .greedy import GreedyConfig, greedy_select
from .reachability import cached_reach_store
from .result import SeedResult
from .weight_reset import bwr_select, wr_select

log = logging.getLogger(__name__)

SCHEMA = "wicmax-results/1"
ALGORITHMS = ("greedy", "wr", "bwr", "pagerank", "random")
MODELS = ("ic", "wic")
DEFAULT_K = (1, 2, 5, 10, 20, 30, 40, 50)
GREEDY_NODE_LIMIT = 50_000
DESK_NODE_LIMIT = 100_000


class ExperimentError(ValueError):
    """Invalid or refused experiment configuration."""


@dataclasses.dataclass
class ExperimentConfig:
    dataset: Path
    model: str = "wic"
    algorithms: tuple[str, ...] = ("bwr",)
    k_schedule: tuple[int, ...] = DEFAULT_K
    theta: float = 1e-4
    R_select: int = 10_000
    R_eval: int = 20_000
    rng_seed: int = 42
    undirected: bool = False
    prob_scheme: ProbScheme = dataclasses.field(default_factory=Trivalency)
    weight_scheme: WeightScheme | None = None
    output: Path | None = None
    threads: int = 1
    lazy: bool = False
    score_self: bool = True
    max_paths: int | None = None
    force: bool = False
    large: bool = False
    cache_dir: Path | None = None

    def __post_init__(self) -> None:
        if self.model not in MODELS:
            raise ExperimentError(f"unknown model {self.model!r}; choose from {', '.join(MODELS)}")
        for a in self.algorithms:
            if a not in ALGORITHMS:
                raise ExperimentError(f"unknown algorithm {a!r}; choose from {', '.join(ALGORITHMS)}")
        ks = list(self.k_schedule)
        if not ks or ks[0] < 1 or any(b <= a for a, b in zip(ks, ks[1:])):
            raise ExperimentError("k schedule must be positive and strictly increasing")
        if self.R_eval < 1 or self.R_select < 1:
            raise ExperimentError("R_select and R_eval must be at least 1")
        if not 0.0 <= self.theta < 1.0:
            raise ExperimentError("theta must lie in [0, 1)")

    @property
    def weights(self) -> WeightScheme:
        if self.weight_scheme is not None:
            return self.weight_scheme
        return Uniform(1.0) if self.model == "ic" else RandomInt(10)


@dataclasses.dataclass
class ResultRow:
    algorithm: str
    model: str
    k: int
    sigma_mean: float
    sigma_stderr: float
    activated_count_mean: float
    select_time_ms: float
    eval_time_ms: float
    theta: float | None
    rng_seed: int
    seeds: list[int]


RESULT_COLUMNS = ("algorithm", "model", "k", "theta", "rng_seed", "sigma_mean", "sigma_stderr", "activated_count_mean", "seeds")
TIMING_COLUMNS = ("algorithm", "model", "k", "theta", "select_time_ms", "eval_time_ms")


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.6g}"
    if isinstance(x, (list, tuple)):
        return " ".join(str(v) for v in x)
    return str(x)


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _csv_text(rows: Sequence, columns: Sequence[str], schema: str | None) -> str:
    buf = io.StringIO()
    if schema:
        buf.write(f"# {schema}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(getattr(r, c)) for c in columns])
    return buf.getvalue()


def timings_path(path: Path) -> Path:
    return path.with_name(f"{path.stem}.timings.csv")


def write_rows(rows: Sequence, path: Path, columns: Sequence[str] = RESULT_COLUMNS, schema: str = SCHEMA) -> None:
    """Write results (CSV, or JSON for a ``.json`` path) plus the timings sidecar."""
    path = Path(path)
    if path.suffix == ".json":
        payload = {"schema": schema, "rows": [{c: getattr(r, c) for c in columns} for r in rows]}
        _atomic_write(path, json.dumps(payload, indent=1) + "\n")
    else:
        _atomic_write(path, _csv_text(rows, columns, schema))
    if all(hasattr(r, "select_time_ms") for r in rows):
        _atomic_write(timings_path(path), _csv_text(rows, TIMING_COLUMNS, None))


def render_rows(rows: Sequence, columns: Sequence[str] = RESULT_COLUMNS, schema: str = SCHEMA) -> str:
    return _csv_text(rows, columns, schema)


def prepare_graph(cfg: ExperimentConfig, weights: WeightScheme | None = None) -> WicGraph:
    g = load_edge_list(cfg.dataset, undirected=cfg.undirected)
    if g.node_count > DESK_NODE_LIMIT and not cfg.large:
        raise ExperimentError(f"{g.node_count} nodes exceeds the desk-scale limit of {DESK_NODE_LIMIT}; pass --large")
    if "greedy" in cfg.algorithms and g.node_count > GREEDY_NODE_LIMIT and not cfg.force:
        raise ExperimentError(
            f"greedy on {g.node_count} nodes would run for days; pass --force, or drop greedy and use bwr"
        )
    g = assign_probabilities(g, cfg.prob_scheme, cfg.rng_seed)
    return assign_weights(g, weights or cfg.weights, cfg.rng_seed)


def select_seeds(g: WicGraph, algorithm: str, k: int, cfg: ExperimentConfig, theta: float | None = None) -> SeedResult:
    theta = cfg.theta if theta is None else theta
    if algorithm == "greedy":
        return greedy_select(g, GreedyConfig(k, cfg.R_select, cfg.rng_seed, cfg.lazy, cfg.threads))
    if algorithm == "wr":
        t0 = time.perf_counter()
        store = cached_reach_store(g, 0.0, cfg.cache_dir, cfg.max_paths)
        pre = time.perf_counter() - t0
        res = wr_select(g, store, k, score_self=cfg.score_self)
        return _shift(res, pre)
    if algorithm == "bwr":
        t0 = time.perf_counter()
        store = cached_reach_store(g, theta, cfg.cache_dir, cfg.max_paths)
        pre = time.perf_counter() - t0
        res = bwr_select(g, k, theta, store=store, score_self=cfg.score_self)
        return _shift(res, pre)
    if algorithm == "pagerank":
        return pagerank_select(g, k, PageRankConfig(weighted_votes=cfg.model == "wic"))
    if algorithm == "random":
        return random_select(g, k, cfg.rng_seed)
    raise ExperimentError(f"unknown algorithm {algorithm!r}")


def _shift(res: SeedResult, pre: float) -> SeedResult:
    res.pretreatment_time += pre
    res.round_times = [t + pre for t in res.round_times]
    return res


def _theta_of(algorithm: str, theta: float) -> float | None:
    return {"bwr": theta, "wr": 0.0}.get(algorithm)


def evaluate_rows(g: WicGraph, res: SeedResult, cfg: ExperimentConfig, ks: Sequence[int], theta: float | None) -> list[ResultRow]:
    eval_seed = derive_seed(cfg.rng_seed, STREAM_EVAL)
    rows = []
    for k in ks:
        seeds = res.prefix(k)
        t0 = time.perf_counter()
        est = estimate_sigma(g, seeds, cfg.R_eval, eval_seed, cfg.threads)
        eval_ms = (time.perf_counter() - t0) * 1e3
        rows.append(
            ResultRow(
                res.algorithm if res.algorithm != "pagerank-wic" else "pagerank",
                cfg.model,
                k,
                est.mean,
                est.std_error,
                est.mean_activated,
                res.time_for(k) * 1e3,
                eval_ms,
                theta,
                cfg.rng_seed,
                [int(g.labels[s]) for s in seeds],
            )
        )
        log.info("%s k=%d sigma=%.6g +- %.3g", res.algorithm, k, est.mean, est.std_error)
    return rows


def run_experiment(cfg: ExperimentConfig, g: WicGraph | None = None) -> list[ResultRow]:
    """One row per (algorithm, k); seed sets for smaller k are prefixes of the largest run."""
    g = g or prepare_graph(cfg)
    kmax = cfg.k_schedule[-1]
    if kmax > g.node_count:
        raise ExperimentError(f"k={kmax} exceeds node count {g.node_count}")
    rows: list[ResultRow] = []
    for algo in cfg.algorithms:
        res = select_seeds(g, algo, kmax, cfg)
        rows.extend(evaluate_rows(g, res, cfg, cfg.k_schedule, _theta_of(algo, cfg.theta)))
    if cfg.output:
        write_rows(rows, cfg.output)
    return rows


def theta_sweep(cfg: ExperimentConfig, thetas: Sequence[float], g: WicGraph | None = None) -> list[ResultRow]:
    """BWR at k = max of the schedule for each theta, rows ordered by descending theta."""
    g = g or prepare_graph(cfg)
    k = cfg.k_schedule[-1]
    rows = []
    for theta in sorted(thetas, reverse=True):
        res = select_seeds(g, "bwr", k, cfg, theta=theta)
        rows.extend(evaluate_rows(g, res, cfg, [k], theta))
    if cfg.output:
        write_rows(rows, cfg.output)
    return rows


@dataclasses.dataclass
class ComparisonRow:
    algorithm: str
    k: int
    sigma_wic_seeds: float
    sigma_ic_seeds: float
    stderr_wic_seeds: float
    stderr_ic_seeds: float
    ratio: float
    wic_seeds: list[int]
    ic_seeds: list[int]


COMPARISON_COLUMNS = tuple(f.name for f in dataclasses.fields(ComparisonRow))


def compare_models(
    cfg: ExperimentConfig,
    ic_weights: WeightScheme | None = None,
    wic_weights: WeightScheme | None = None,
    g: WicGraph | None = None,
) -> list[ComparisonRow]:
    """Select under IC weights and under WIC weights on the same structure and
    probabilities, then score both seed sets under the WIC weights.

    ``ratio`` is sigma(WIC-selected) / sigma(IC-selected), both measured with
    one shared evaluation seed.
    """
    ic_weights = ic_weights or Uniform(1.0)
    wic_weights = wic_weights or cfg.weight_scheme or RandomInt(10)
    base = g or prepare_graph(cfg, Uniform(1.0))
    g_ic = assign_weights(base, ic_weights, cfg.rng_seed)
    g_wic = assign_weights(base, wic_weights, cfg.rng_seed)
    eval_seed = derive_seed(cfg.rng_seed, STREAM_EVAL)
    rows = []
    for algo in cfg.algorithms:
        sel_ic = select_seeds(g_ic, algo, cfg.k_schedule[-1], dataclasses.replace(cfg, model="ic"))
        sel_wic = select_seeds(g_wic, algo, cfg.k_schedule[-1], dataclasses.replace(cfg, model="wic"))
        for k in cfg.k_schedule:
            a = estimate_sigma(g_wic, sel_wic.prefix(k), cfg.R_eval, eval_seed, cfg.threads)
            b = estimate_sigma(g_wic, sel_ic.prefix(k), cfg.R_eval, eval_seed, cfg.threads)
            ratio = a.mean / b.mean if b.mean > 0 else float("inf")
            lab = g_wic.labels
            rows.append(
                ComparisonRow(
                    algo, k, a.mean, b.mean, a.std_error, b.std_error, ratio,
                    [int(lab[s]) for s in sel_wic.prefix(k)], [int(lab[s]) for s in sel_ic.prefix(k)],
                )
            )
    if cfg.output:
        write_rows(rows, cfg.output, COMPARISON_COLUMNS, "wicmax-compare/1")
    return rows
