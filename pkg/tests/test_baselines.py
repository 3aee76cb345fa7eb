import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_graph
from wicmax.baselines import PageRankConfig, pagerank_scores, pagerank_select, random_select
from wicmax.generators import random_wic_graph


def test_symmetric_two_cycle():
    g = make_graph(2, [(0, 1, 0.4), (1, 0, 0.4)])
    trace = pagerank_scores(g, PageRankConfig())
    assert trace.scores == pytest.approx([0.5, 0.5])
    assert pagerank_select(g, 1).seeds == [0]


def test_weighted_votes_favor_heavy_node():
    g = make_graph(2, [], [10, 1])
    res = pagerank_select(g, 1, PageRankConfig(weighted_votes=True))
    assert res.seeds == [0] and res.algorithm == "pagerank-wic"


def test_star_center_ranks_first():
    g = make_graph(4, [(1, 0, 0.3), (2, 0, 0.6), (3, 0, 0.9)])
    scores = pagerank_scores(g, PageRankConfig()).scores
    assert int(np.argmax(scores)) == 0


def test_transition_uses_probability_share():
    # 0 splits its mass 1:3 between 1 and 2
    g = make_graph(3, [(0, 1, 0.2), (0, 2, 0.6), (1, 0, 1.0), (2, 0, 1.0)])
    s = pagerank_scores(g, PageRankConfig(tolerance=1e-12)).scores
    assert s[2] > s[1]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.booleans())
def test_scores_sum_to_one(seed, weighted):
    g = random_wic_graph(15, 30, np.random.default_rng(seed))
    trace = pagerank_scores(g, PageRankConfig(weighted_votes=weighted, tolerance=1e-9))
    assert all(abs(s - 1) <= 1e-9 for s in trace.sums)


def test_uniform_weights_match_unweighted():
    g = random_wic_graph(20, 50, np.random.default_rng(3), weight_max=None)
    a = pagerank_scores(g, PageRankConfig()).scores
    b = pagerank_scores(g, PageRankConfig(weighted_votes=True)).scores
    np.testing.assert_allclose(a, b, atol=1e-12, rtol=0)


def test_converges_on_strongly_connected_graph():
    n = 8
    g = make_graph(n, [(i, (i + 1) % n, 0.5) for i in range(n)] + [(i, (i + 3) % n, 0.2) for i in range(n)])
    trace = pagerank_scores(g, PageRankConfig())
    assert trace.last_delta < 1e-3 and trace.iterations < 10_000


def test_iteration_cap():
    g = random_wic_graph(20, 50, np.random.default_rng(3))
    assert pagerank_scores(g, PageRankConfig(max_iters=2, tolerance=1e-15)).iterations == 2


def test_no_edges_is_uniform():
    s = pagerank_scores(make_graph(3, []), PageRankConfig()).scores
    assert s == pytest.approx([1 / 3] * 3)


def test_config_validation():
    with pytest.raises(ValueError):
        PageRankConfig(damping=1.0)
    with pytest.raises(ValueError):
        PageRankConfig(tolerance=0)


def test_random_selection():
    g = random_wic_graph(30, 40, np.random.default_rng(0))
    a = random_select(g, 10, 5)
    assert a.seeds == random_select(g, 10, 5).seeds
    assert len(set(a.seeds)) == 10
    assert random_select(g, 4, 5).seeds == a.seeds[:4]
    assert sorted(random_select(g, 30, 1).seeds) == list(range(30))
    assert random_select(make_graph(1, []), 1).seeds == [0]


def test_k_too_large():
    g = make_graph(2, [])
    with pytest.raises(ValueError):
        random_select(g, 3)
    with pytest.raises(ValueError):
        pagerank_select(g, 3)
