import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_graph, path_oracle
from wicmax.cascade import exact_activation_probabilities
from wicmax.generators import random_wic_graph
from wicmax.reachability import (
    PathBudgetExceeded,
    ReachStore,
    TreeKind,
    build_reach_store,
    build_tree,
    cache_path,
    cached_reach_store,
    gen_pr,
    gen_pr_bounded,
    load_reach_store,
    save_reach_store,
)


def test_single_edge():
    assert gen_pr(make_graph(2, [(0, 1, 0.3)]), 0) == {1: pytest.approx(0.3)}


def test_two_path(two_path):
    pr = gen_pr(two_path, 0)
    assert pr[1] == pytest.approx(0.625, abs=1e-15)
    assert pr[2] == pytest.approx(0.5)


def test_triangle_cycle_is_cut():
    g = make_graph(3, [(0, 1, 0.5), (1, 2, 0.5), (2, 0, 0.5)])
    pr = gen_pr(g, 0)
    assert 0 not in pr
    assert pr[2] == pytest.approx(0.25)


def test_bounded_chain():
    g = make_graph(6, [(i, i + 1, 0.1) for i in range(5)])
    pr = gen_pr_bounded(g, 0, 1e-4)
    # 0.1**4 equals theta, so four hops are already cut
    assert set(pr) == {1, 2, 3}
    assert set(gen_pr_bounded(g, 0, 9e-5)) == {1, 2, 3, 4}


def test_bounded_extremes(two_path):
    assert gen_pr_bounded(two_path, 0, 0.0) == gen_pr(two_path, 0)
    g = random_wic_graph(8, 20, np.random.default_rng(1), prob_choices=[0.1])
    assert len(build_reach_store(g, 0.9)) == 0
    with pytest.raises(ValueError):
        gen_pr_bounded(g, 0, 1.0)


@pytest.mark.parametrize("seed", range(15))
def test_matches_path_oracle(seed):
    g = random_wic_graph(6, 14, np.random.default_rng(seed))
    for s in range(g.node_count):
        got, want = gen_pr(g, s), path_oracle(g, s)
        assert got.keys() == want.keys()
        for v in want:
            assert abs(got[v] - want[v]) <= 1e-12


def test_dag_matches_exact_activation():
    # on a tree-shaped DAG paths are disjoint, so noisy-or is exact
    g = make_graph(6, [(0, 1, 0.5), (0, 2, 0.3), (1, 3, 0.7), (2, 4, 0.2), (4, 5, 0.9)])
    exact = exact_activation_probabilities(g, [0])
    pr = gen_pr(g, 0)
    for v in range(1, 6):
        assert pr[v] == pytest.approx(exact[v], abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([1e-1, 1e-2, 1e-3]))
def test_bounded_is_contained(seed, theta):
    g = random_wic_graph(7, 16, np.random.default_rng(seed))
    full = build_reach_store(g).to_dict()
    bounded = build_reach_store(g, theta).to_dict()
    assert bounded.keys() <= full.keys()
    for key, p in bounded.items():
        assert theta < p <= full[key] + 1e-15


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.permutations(range(6)))
def test_relabel_invariance(seed, perm):
    g = random_wic_graph(6, 12, np.random.default_rng(seed))
    moved = make_graph(6, [(perm[u], perm[v], p) for u, v, p in g.edges()])
    a = build_reach_store(g).to_dict()
    b = build_reach_store(moved).to_dict()
    assert a.keys() == {(perm.index(u), perm.index(v)) for u, v in b}
    for (u, v), p in a.items():
        assert b[(perm[u], perm[v])] == pytest.approx(p, abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_store_invariants(seed):
    g = random_wic_graph(7, 18, np.random.default_rng(seed))
    store = build_reach_store(g)
    d = store.to_dict()
    assert all(u != v and 0 < p <= 1 for (u, v), p in d.items())
    for v in range(g.node_count):
        preds, pp = store.predecessors(v)
        assert {(int(u), v): p for u, p in zip(preds, pp)} == {k: p for k, p in d.items() if k[1] == v}


def test_trees(two_path):
    store = build_reach_store(two_path)
    ivt = build_tree(store, two_path, 0, TreeKind.IVT)
    assert ivt.value == pytest.approx(1.125)
    assert dict(ivt.entries) == pytest.approx({1: 0.625, 2: 0.5})
    g2 = two_path.with_weights(np.array([1.0, 2.0, 1.0]))
    wdt = build_tree(store, g2, 1, "wdt")
    assert wdt.value == pytest.approx(2.25)
    assert dict(wdt.entries) == pytest.approx({0: 0.625, 2: 0.5})
    assert build_tree(store, two_path, 1, TreeKind.IVT).value == 0


def test_bounded_tree_entries_exceed_theta():
    g = random_wic_graph(8, 20, np.random.default_rng(3))
    store = build_reach_store(g, 0.05)
    for u in range(g.node_count):
        for kind in (TreeKind.BIVT, TreeKind.BWDT):
            assert all(p > 0.05 for _, p in build_tree(store, g, u, kind).entries)


def test_path_budget():
    g = random_wic_graph(10, 60, np.random.default_rng(0))
    with pytest.raises(PathBudgetExceeded):
        gen_pr(g, 0, max_paths=10)


def test_parallel_build_matches_serial():
    g = random_wic_graph(30, 70, np.random.default_rng(4))
    a = build_reach_store(g, 1e-3)
    b = build_reach_store(g, 1e-3, workers=2)
    assert a.to_dict() == b.to_dict()


def test_cache_round_trip(tmp_path):
    g = random_wic_graph(12, 30, np.random.default_rng(2))
    store = build_reach_store(g, 1e-3)
    path = tmp_path / "s.bin"
    save_reach_store(store, path, g.fingerprint())
    back = load_reach_store(path, g.fingerprint(), 1e-3)
    assert back.to_dict() == store.to_dict() and back.theta == 1e-3
    with pytest.raises(ValueError, match="theta"):
        load_reach_store(path, g.fingerprint(), 1e-4)
    other = g.with_probs(np.full(g.edge_count, 0.5))
    with pytest.raises(ValueError, match="different graph"):
        load_reach_store(path, other.fingerprint())


def test_cached_store_reuses_file(tmp_path):
    g = random_wic_graph(12, 30, np.random.default_rng(2))
    first = cached_reach_store(g, 1e-3, tmp_path)
    assert cache_path(tmp_path, g, 1e-3).exists()
    assert cached_reach_store(g, 1e-3, tmp_path).to_dict() == first.to_dict()


def test_empty_rows():
    store = ReachStore.from_rows(3, 0.0, [{}, {}, {}])
    assert len(store) == 0 and store.get(0, 1) == 0.0
