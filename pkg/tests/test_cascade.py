import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_graph
from wicmax.cascade import (
    EXACT_EDGE_LIMIT,
    EdgeCoins,
    brute_force_optimum,
    estimate_sigma,
    exact_activation_probabilities,
    exact_sigma,
    run_cascade,
    spread_samples,
)
from wicmax.generators import random_wic_graph


def test_empty_seed_set():
    g = make_graph(2, [(0, 1, 0.5)])
    out = run_cascade(g, [], np.random.default_rng(0))
    assert out.activated == set() and out.value == 0
    est = estimate_sigma(g, [], 100, 1)
    assert est.mean == 0 and est.std_error == 0


def test_isolated_seed():
    g = make_graph(2, [], [7, 1])
    assert run_cascade(g, [0], np.random.default_rng(0)).value == 7


def test_deterministic_chain():
    g = make_graph(2, [(0, 1, 1.0)])
    out = run_cascade(g, [0], np.random.default_rng(0))
    assert out.activated == {0, 1} and out.value == 2


def test_seed_out_of_range():
    g = make_graph(2, [(0, 1, 1.0)])
    with pytest.raises(ValueError, match="out of range"):
        run_cascade(g, [5], np.random.default_rng(0))
    with pytest.raises(ValueError):
        estimate_sigma(g, [-1], 10, 0)


def test_star_spread():
    g = make_graph(3, [(0, 1, 0.5), (0, 2, 0.5)])
    est = estimate_sigma(g, [0], 100_000, 11)
    assert abs(est.mean - 2.0) <= 3 * est.std_error


def test_two_path_exact(two_path):
    assert exact_sigma(two_path, [0]) == pytest.approx(2.125, abs=1e-12)
    est = estimate_sigma(two_path, [0], 100_000, 5)
    assert abs(est.mean - 2.125) <= 4 * est.std_error


def test_exact_limits():
    assert exact_sigma(make_graph(3, [(0, 1, 0.0), (1, 2, 0.0)], [2, 3, 4]), [0, 1]) == 5
    g = make_graph(4, [(0, 1, 1.0), (1, 2, 1.0), (3, 0, 1.0)])
    assert exact_sigma(g, [0]) == 3
    big = random_wic_graph(8, EXACT_EDGE_LIMIT + 1, np.random.default_rng(0))
    with pytest.raises(ValueError, match=str(EXACT_EDGE_LIMIT)):
        exact_sigma(big, [0])


def test_replay_matches_batch():
    g = random_wic_graph(30, 120, np.random.default_rng(4))
    values, counts = spread_samples(g, [0, 3], 50, 77)
    coins = EdgeCoins(77)
    for r in range(50):
        out = run_cascade(g, [0, 3], coins.repetition(r))
        assert out.value == values[r]
        assert len(out.activated) == counts[r]


def test_chunking_and_threads_do_not_matter(monkeypatch):
    import wicmax.cascade as cascade

    g = random_wic_graph(40, 160, np.random.default_rng(8))
    ref = estimate_sigma(g, [1, 2], 3000, 5)
    monkeypatch.setattr(cascade, "CHUNK_REPS", 128)
    threaded = estimate_sigma(g, [1, 2], 3000, 5, threads=4)
    assert (ref.mean, ref.std_error) == (threaded.mean, threaded.std_error)


def test_different_seeds_give_different_worlds():
    g = random_wic_graph(20, 60, np.random.default_rng(1))
    a = spread_samples(g, [0], 200, 1)[0]
    b = spread_samples(g, [0], 200, 2)[0]
    assert not np.array_equal(a, b)


def test_generator_path_is_reproducible():
    g = random_wic_graph(20, 60, np.random.default_rng(1))
    a = run_cascade(g, [0], np.random.default_rng(3))
    b = run_cascade(g, [0], np.random.default_rng(3))
    assert a == b


def test_ic_special_case():
    g = random_wic_graph(25, 80, np.random.default_rng(6), weight_max=None)
    est = estimate_sigma(g, [0, 1], 2000, 3)
    assert est.mean == est.mean_activated


small_graphs = st.builds(
    lambda seed, n, m: random_wic_graph(n, min(m, n * (n - 1)), np.random.default_rng(seed)),
    st.integers(0, 10**6),
    st.integers(2, 5),
    st.integers(1, 8),
)


@settings(max_examples=40, deadline=None)
@given(small_graphs, st.floats(0.1, 10.0))
def test_weight_linearity(g, c):
    seeds = [0]
    scaled = g.with_weights(g.weights * c)
    assert exact_sigma(scaled, seeds) == pytest.approx(c * exact_sigma(g, seeds), rel=1e-12)


@settings(max_examples=30, deadline=None)
@given(small_graphs)
def test_monotone_and_submodular(g):
    n = g.node_count
    subsets = [frozenset(c) for r in range(n + 1) for c in itertools.combinations(range(n), r)]
    val = {s: exact_sigma(g, s) for s in subsets}
    for s in subsets:
        for t in subsets:
            if not s <= t:
                continue
            assert val[s] <= val[t] + 1e-12
            for v in set(range(n)) - t:
                assert val[s | {v}] - val[s] >= val[t | {v}] - val[t] - 1e-12


@settings(max_examples=30, deadline=None)
@given(small_graphs)
def test_activation_probabilities_bounded(g):
    p = exact_activation_probabilities(g, [0])
    assert p[0] == pytest.approx(1.0)
    assert ((p >= -1e-12) & (p <= 1 + 1e-12)).all()


def test_brute_force_optimum(hub_and_millionaire):
    seeds, val = brute_force_optimum(hub_and_millionaire, 1)
    assert seeds == (4,) and val == 100
    seeds, val = brute_force_optimum(hub_and_millionaire, 2)
    assert seeds == (0, 4) and val == 104
