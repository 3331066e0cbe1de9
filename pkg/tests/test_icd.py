from itertools import combinations
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import bruteforce as bf
from icdlib.citest import CiCache
from icdlib.graph import ARROW, CIRCLE, CausalDag, GraphError, MixedGraph, graph_equal
from icdlib.icd import (
    IcdConfig,
    icd_iteration,
    icd_main,
    iter_candidates,
    iter_icd,
    pds_distances,
    pdsep_r,
)
from icdlib.oracle import DSepOracle, true_pag
from icdlib.orientation import SepsetRecord
from icdlib.simgen import random_instance


def test_r0_single_empty_candidate():
    c = pdsep_r(MixedGraph.complete(5), 0, 1, 0)
    assert [(x.nodes, x.score) for x in c] == [((), 0.0)]


def test_complete_four_node_r1():
    c = pdsep_r(MixedGraph.complete(4), 0, 1, 1)
    assert [(x.nodes, x.score) for x in c] == [((2,), 1.0), ((3,), 1.0)]


def test_non_adjacent_pair_rejected():
    g = MixedGraph(3)
    g.add_edge(0, 1)
    with pytest.raises(GraphError):
        pdsep_r(g, 0, 2, 1)
    with pytest.raises(ValueError):
        pdsep_r(g, 0, 1, -1)


def _pool(g, x, y, r):
    dx = bf.pds_lengths_brute(g, x, y, restrict=True)
    dy = bf.pds_lengths_brute(g, y, x, restrict=True)
    return {z for z in set(dx) | set(dy) if z not in (x, y) and min(dx.get(z, 99), dy.get(z, 99)) <= r}


@settings(max_examples=120, deadline=None)
@given(st.integers(3, 6), st.floats(0.3, 0.95), st.integers(0, 3), st.integers(0, 2**30))
def test_candidates_match_enumeration(n, p, r, seed):
    rng = np.random.default_rng(seed)
    g = bf.random_mixed_graph(n, p, rng)
    if not g.edges():
        return
    x, y = g.edges()[int(rng.integers(len(g.edges())))]
    full = pdsep_r(g, x, y, r, closure=False)
    if r == 0:
        assert [c.nodes for c in full] == [()]
        return
    pool = _pool(g, x, y, r)
    assert {c.nodes for c in full} == {tuple(sorted(z)) for z in combinations(pool, r)}
    assert len(full) == comb(len(pool), r)
    # ascending mean distance from the smaller endpoint, ties lexicographic
    dx = bf.pds_lengths_brute(g, min(x, y), max(x, y), restrict=True)
    dy = bf.pds_lengths_brute(g, max(x, y), min(x, y), restrict=True)
    rank = {z: dx.get(z, dy.get(z)) for z in pool}
    want = sorted(full, key=lambda c: (sum(rank[z] for z in c.nodes), c.nodes))
    assert [c.nodes for c in full] == [c.nodes for c in want]
    for c in full:
        assert c.score == pytest.approx(sum(rank[z] for z in c.nodes) / r)
    # the closure filter keeps a subsequence
    kept = [c.nodes for c in pdsep_r(g, x, y, r, closure=True)]
    it = iter(c.nodes for c in full)
    assert all(k in it for k in kept)


def test_lexicographic_order():
    c = pdsep_r(MixedGraph.complete(5), 0, 1, 2, ordering="lexicographic")
    assert [x.nodes for x in c] == [(2, 3), (2, 4), (3, 4)]


def test_candidates_are_lazy():
    g = MixedGraph.complete(30)
    first = next(iter_candidates(g, 0, 1, 5))
    assert first.nodes == (2, 3, 4, 5, 6)


def test_iteration_removes_independent_pair():
    g = MixedGraph.complete(2)
    seps = SepsetRecord()
    g, done = icd_iteration(g, seps, 0, lambda x, y, z: True)
    assert g.num_edges() == 0 and seps.get(0, 1) == frozenset() and not done


def test_iteration_on_chain():
    o = DSepOracle(CausalDag.from_edges(3, [(0, 1), (1, 2)]))
    g, seps = MixedGraph.complete(3), SepsetRecord()
    g, _ = icd_iteration(g, seps, 0, o)
    assert g.num_edges() == 3
    g, _ = icd_iteration(g, seps, 1, o)
    assert not g.is_adjacent(0, 2) and seps.get(0, 2) == {1}


def test_main_small_cases():
    g = icd_main(2, lambda x, y, z: False)
    assert g.edges() == [(0, 1)] and g.mark(0, 1) == CIRCLE == g.mark(1, 0)
    o = DSepOracle(CausalDag.from_edges(3, [(0, 1), (2, 1)]))
    g = icd_main(3, o)
    assert g.mark(0, 1) == ARROW == g.mark(2, 1)
    assert g.mark(1, 0) == CIRCLE == g.mark(1, 2)


@pytest.mark.parametrize("cfg", [
    IcdConfig(r0=2, n_max=1), IcdConfig(n_max=9), IcdConfig(r0=-1), IcdConfig(ordering="random"),
])
def test_bad_config(cfg):
    with pytest.raises(ValueError):
        icd_main(5, lambda x, y, z: False, cfg)


@pytest.mark.parametrize("cfg", [
    IcdConfig(), IcdConfig(ordering="lexicographic"), IcdConfig(pds_restrict=False), IcdConfig(closure=False),
])
def test_variants_recover_true_pag(cfg):
    for seed in range(6):
        scm = random_instance(11, 2.0, seed)
        o = DSepOracle(scm.dag)
        assert graph_equal(icd_main(o.n_observed, o, cfg), true_pag(scm.dag))


def test_anytime_properties_and_query_sizes():
    for seed in range(10):
        scm = random_instance(12, 2.0, 40 + seed)
        o = DSepOracle(scm.dag)
        log = []
        cache = CiCache(o, log=log)
        prev_edges = None
        start = 0
        for r, g, seps in iter_icd(o.n_observed, cache, IcdConfig()):
            assert all(len(q[2]) == r for q in log[start:])
            start = len(log)
            edges = g.skeleton()
            if prev_edges is not None:
                assert edges <= prev_edges
            prev_edges = edges
            for (a, b), z in seps.items():
                assert o(a, b, z)


def test_sepset_members_reachable_at_removal():
    # every recorded set is PDS-reachable (inside the set) from one endpoint
    for seed in range(8):
        scm = random_instance(12, 2.0, 70 + seed)
        o = DSepOracle(scm.dag)
        g = MixedGraph.complete(o.n_observed)
        seps = SepsetRecord()
        for r in range(o.n_observed - 1):
            snap = g.copy()
            before = dict(seps.items())
            g, done = icd_iteration(g, seps, r, o)
            for key, z in seps.items():
                if key in before or not z:
                    continue
                # checked against the graph as it stood when the pass began
                x, y = key
                dx = pds_distances(snap, x, y, restrict=False)
                dy = pds_distances(snap, y, x, restrict=False)
                assert all(v in dx or v in dy for v in z)
            if done:
                break


def test_initial_graph_node_count_checked():
    with pytest.raises(GraphError):
        icd_main(4, lambda x, y, z: False, initial=MixedGraph.complete(3))
