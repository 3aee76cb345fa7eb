"""Influence maximization on the weighted independent cascade (WIC) model."""

from .baselines import PageRankConfig, pagerank_select, random_select
from .cascade import (
    CascadeOutcome,
    SpreadEstimate,
    estimate_sigma,
    exact_sigma,
    run_cascade,
)
from .graph import (
    Constant,
    FromFile,
    RandomInt,
    Trivalency,
    Uniform,
    WicGraph,
    assign_probabilities,
    assign_weights,
    load_edge_list,
)
from .greedy import GreedyConfig, greedy_select, marginal_gain
from .reachability import ReachStore, TreeKind, build_reach_store, build_tree, gen_pr, gen_pr_bounded
from .result import SeedResult
from .weight_reset import bwr_select, suggest_theta, wr_select

__version__ = "0.1.0"
