"""Weight Reset (WR) and Bounded Weight Reset (BWR) seed selection.

Both run over a :class:`ReachStore`. Each round picks the node with the best
score, resets its residual weight to zero and discounts every successor's
residual weight by ``1 - p_r(seed, v)``. WR then recomputes all node values
from scratch; BWR updates them incrementally. With ``theta = 0`` the two are
the same algorithm and must agree.
"""

from __future__ import annotations

import dataclasses
import math
import time

import numpy as np

from .graph import WicGraph
from .reachability import ReachStore, build_reach_store
from .result import SeedResult

WEIGHT_FLOOR = 1e-12
TIE_TOL = 1e-9


class SelectionState:
    """Residual weights, node values V and the seeds picked so far.

    ``score_self`` ranks candidates by ``V_u + residual_u`` so the seed's own
    weight counts; ``False`` ranks by ``V_u`` alone.
    """

    def __init__(self, store: ReachStore, weights: np.ndarray, *, incremental: bool, score_self: bool = True):
        self.store = store
        self.incremental = incremental
        self.score_self = score_self
        self.residual = np.asarray(weights, dtype=float).copy()
        self.is_selected = np.zeros(store.node_count, dtype=bool)
        self.selected: list[int] = []
        self.values = self.recompute_values()

    def recompute_values(self) -> np.ndarray:
        """V_u = sum over stored v of p_r(u, v) * residual_v, from scratch."""
        s = self.store
        vals = np.bincount(s.sources, weights=s.probs * self.residual[s.targets], minlength=s.node_count)
        return vals.astype(float)

    def scores(self) -> np.ndarray:
        return self.values + self.residual if self.score_self else self.values.copy()

    def pick(self) -> tuple[int, float]:
        """Best unselected node; scores within TIE_TOL of the best go to the smallest id."""
        sc = np.where(self.is_selected, -np.inf, self.scores())
        best = sc.max()
        if best == -np.inf:
            raise ValueError("every node is already selected")
        u = int(np.flatnonzero(sc >= best - TIE_TOL * max(1.0, abs(best)))[0])
        return u, float(sc[u])

    def select(self, u: int) -> None:
        if self.is_selected[u]:
            raise ValueError(f"node {u} already selected")
        store, res, vals = self.store, self.residual, self.values
        self.is_selected[u] = True
        self.selected.append(u)
        if self.incremental:
            preds, pp = store.predecessors(u)
            vals[preds] -= res[u] * pp
        res[u] = 0.0
        succ, sp = store.successors(u)
        for v, p in zip(succ.tolist(), sp.tolist()):
            old = res[v]
            if old == 0.0:
                continue
            new = (1.0 - p) * old
            if new < WEIGHT_FLOOR:
                new = 0.0
            res[v] = new
            if self.incremental:
                preds, pp = store.predecessors(v)
                vals[preds] += pp * (new - old)
        if not self.incremental:
            self.values = self.recompute_values()

    def step(self) -> tuple[int, float]:
        u, score = self.pick()
        self.select(u)
        return u, score


def _run(name: str, g: WicGraph, store: ReachStore, k: int, *, incremental: bool, score_self: bool, t0: float, pre: float) -> SeedResult:
    if k > g.node_count:
        raise ValueError(f"k={k} exceeds node count {g.node_count}")
    if store.node_count != g.node_count:
        raise ValueError("reachability store does not match the graph")
    state = SelectionState(store, g.weights, incremental=incremental, score_self=score_self)
    res = SeedResult(name, [], [], [], pretreatment_time=pre)
    for _ in range(k):
        u, score = state.step()
        res.seeds.append(u)
        res.scores.append(score)
        res.round_times.append(time.perf_counter() - t0)
    return res


def wr_select(g: WicGraph, store: ReachStore | None, k: int, *, score_self: bool = True, max_paths: int | None = None) -> SeedResult:
    """Weight Reset over an unbounded store; values are fully recomputed each round."""
    t0 = time.perf_counter()
    if store is None:
        store = build_reach_store(g, 0.0, max_paths)
    elif store.theta != 0.0:
        raise ValueError("wr_select needs an unbounded store (theta = 0)")
    pre = time.perf_counter() - t0
    return _run("wr", g, store, k, incremental=False, score_self=score_self, t0=t0, pre=pre)


def bwr_select(
    g: WicGraph,
    k: int,
    theta: float = 1e-4,
    *,
    store: ReachStore | None = None,
    score_self: bool = True,
    max_paths: int | None = None,
    workers: int = 1,
) -> SeedResult:
    """Bounded Weight Reset: theta-bounded pre-treatment plus incremental value updates."""
    t0 = time.perf_counter()
    if store is None:
        store = build_reach_store(g, theta, max_paths, workers)
    elif store.theta != theta:
        raise ValueError(f"store was built with theta={store.theta}, not {theta}")
    pre = time.perf_counter() - t0
    return _run("bwr", g, store, k, incremental=True, score_self=score_self, t0=t0, pre=pre)


class ThetaDomainError(ValueError):
    pass


@dataclasses.dataclass
class ThetaAnalysis:
    """Parameters and outputs of the pruning-threshold analysis.

    ``p`` mean edge probability, ``d`` mean out-degree, ``alpha`` the
    unbounded propagation horizon in steps, ``epsilon`` the target slack,
    ``theta`` the threshold, ``alpha_bounded = log_p(theta)`` the horizon the
    threshold implies and ``ratio_bound`` the WR/BWR value ratio bound
    ``(1 - (pd)^alpha) / (1 - (pd)^alpha_bounded)``.
    """

    p: float
    d: float
    alpha: float
    epsilon: float | None
    theta: float
    alpha_bounded: float
    ratio_bound: float

    @property
    def bounded_fraction(self) -> float:
        """Lower bound on BWR's share of WR's expected value, 1 / ratio_bound."""
        return 1.0 / self.ratio_bound


def ratio_bound(p: float, d: float, alpha: float, alpha_bounded: float) -> float:
    """(1 - (pd)^alpha) / (1 - (pd)^alpha_bounded); ``alpha`` may be ``math.inf``."""
    pd = p * d
    num = 1.0 - pd**alpha if math.isfinite(alpha) else (1.0 if pd < 1 else -math.inf)
    return num / (1.0 - pd**alpha_bounded)


def analyze_theta(p: float, d: float, alpha: float, theta: float) -> ThetaAnalysis:
    """Implied bounded horizon and ratio bound for a given threshold."""
    if not 0.0 < p < 1.0:
        raise ThetaDomainError("need 0 < p < 1")
    if not 0.0 < theta < 1.0:
        raise ThetaDomainError("need 0 < theta < 1")
    alpha_b = math.log(theta) / math.log(p)
    return ThetaAnalysis(p, d, alpha, None, theta, alpha_b, ratio_bound(p, d, alpha, alpha_b))


def suggest_theta(p: float, d: float, alpha: float, epsilon: float) -> ThetaAnalysis:
    """Threshold meeting a (1 + epsilon) ratio target under the mean-field model.

    ``theta = (1 - (1 - (pd)^alpha) / ((1 - 1/e)(1 + epsilon))) ** (1 / (1 + 1/log_d p))``.
    Raises :class:`ThetaDomainError` naming the failed condition when the base
    of the power falls outside (0, 1).
    """
    if not 0.0 < p < 1.0:
        raise ThetaDomainError("need 0 < p < 1")
    if d <= 0:
        raise ThetaDomainError("need d > 0")
    if alpha < 1:
        raise ThetaDomainError("need alpha >= 1")
    if epsilon <= 0:
        raise ThetaDomainError("need epsilon > 0")
    pd = p * d
    shrink = (1.0 - pd**alpha) / ((1.0 - 1.0 / math.e) * (1.0 + epsilon))
    base = 1.0 - shrink
    if base <= 0.0:
        raise ThetaDomainError(
            f"base {base:.6g} <= 0: (1 - (pd)^alpha) = {1 - pd**alpha:.6g} must be below "
            f"(1 - 1/e)(1 + epsilon) = {(1 - 1 / math.e) * (1 + epsilon):.6g}; raise epsilon"
        )
    if base >= 1.0:
        raise ThetaDomainError(f"base {base:.6g} >= 1: needs p*d < 1 (got p*d = {pd:.6g})")
    # 1 / log_d(p) = ln d / ln p
    exponent_den = 1.0 + math.log(d) / math.log(p)
    if exponent_den == 0.0:
        raise ThetaDomainError("p*d == 1 makes the exponent undefined")
    theta = base ** (1.0 / exponent_den)
    if not 0.0 < theta < 1.0:
        raise ThetaDomainError(f"theta {theta:.6g} outside (0, 1)")
    out = analyze_theta(p, d, alpha, theta)
    out.epsilon = epsilon
    return out
