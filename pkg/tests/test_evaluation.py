import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from icdlib.evaluation import (
    EXACT_LIMIT,
    Ecdf,
    StructuralErrors,
    ecdf_quantile,
    kolmogorov_sf,
    ks_2sample,
    ks_statistic,
    structural_errors,
)
from icdlib.graph import ARROW, CIRCLE, TAIL, GraphError, MixedGraph

import bruteforce as bf


def _random_pag(rng, n=6):
    return bf.random_mixed_graph(n, 0.5, rng)


def test_structural_error_examples():
    g = MixedGraph.complete(4)
    assert structural_errors(g, g) == StructuralErrors(0, 0, 0)
    assert structural_errors(MixedGraph(4), g) == StructuralErrors(0, 6, 0)
    a, b = MixedGraph(2), MixedGraph(2)
    a.add_edge(0, 1, CIRCLE, ARROW)
    b.add_edge(0, 1, ARROW, CIRCLE)
    assert structural_errors(a, b).wrong_marks == 2
    b.set_mark(1, 0, CIRCLE)
    b.set_mark(0, 1, TAIL)
    assert structural_errors(a, b).wrong_marks == 1
    assert structural_errors(a, b).total == 1
    with pytest.raises(GraphError):
        structural_errors(MixedGraph(3), MixedGraph(4))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**30))
def test_structural_error_symmetries(seed):
    rng = np.random.default_rng(seed)
    a, b = _random_pag(rng), _random_pag(rng)
    ab, ba = structural_errors(a, b), structural_errors(b, a)
    assert (ab.extra_edges, ab.missing_edges) == (ba.missing_edges, ba.extra_edges)
    assert ab.wrong_marks == ba.wrong_marks
    assert structural_errors(a, a).total == 0


def test_ecdf_examples():
    e = Ecdf(range(1, 11))
    assert ecdf_quantile(e, 0.9) == 9
    assert e(9) == 0.9 and e(0) == 0 and e(10) == 1
    assert Ecdf([4, 4, 4]).quantile(0.3) == 4
    with pytest.raises(ValueError):
        Ecdf([])
    with pytest.raises(ValueError):
        ecdf_quantile(e, 0)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=1, max_size=40), st.floats(0.01, 1.0))
def test_quantile_matches_scan(sample, q):
    e = Ecdf(sample)
    want = next(t for t in sorted(sample) if sum(v <= t for v in sample) / len(sample) >= q - 1e-12)
    assert ecdf_quantile(e, q) == want


def test_ks_examples():
    a = [0.3, 1.2, -0.5, 2.2]
    assert ks_2sample(a, a) == (0.0, 1.0)
    assert ks_statistic([1, 2, 3], [4, 5, 6]) == 1.0
    with pytest.raises(ValueError):
        ks_2sample([], [1.0])


def test_ks_matches_frozen_permutation(frozen):
    for case in frozen["ks"]:
        d, p = ks_2sample(case["a"], case["b"])
        assert d == pytest.approx(case["D"], abs=1e-12)
        assert p == pytest.approx(case["p"], abs=0.05)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**30), st.integers(1, 30), st.integers(1, 30))
def test_exact_pvalue_matches_scipy(seed, m, n):
    rng = np.random.default_rng(seed)
    a, b = rng.normal(size=m), rng.normal(0.5, 1, size=n)
    d, p = ks_2sample(a, b)
    ref = stats.ks_2samp(a, b, method="exact")
    assert d == pytest.approx(ref.statistic)
    assert p == pytest.approx(ref.pvalue, abs=1e-6)


def test_asymptotic_branch():
    rng = np.random.default_rng(0)
    a, b = rng.normal(size=150), rng.normal(0.2, 1, size=120)
    assert a.size * b.size > EXACT_LIMIT
    d, p = ks_2sample(a, b)
    lam = math.sqrt(150 * 120 / 270) * d
    assert p == pytest.approx(stats.kstwobign.sf(lam), abs=1e-9)


@pytest.mark.parametrize("lam", [0.05, 0.3, 0.8, 1.0, 1.17, 1.19, 1.5, 2.5, 5.0])
def test_kolmogorov_sf(lam):
    assert kolmogorov_sf(lam) == pytest.approx(stats.kstwobign.sf(lam), abs=1e-10)
    assert kolmogorov_sf(0) == 1.0


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**30))
def test_ks_invariant_under_monotone_transform(seed):
    rng = np.random.default_rng(seed)
    a, b = rng.normal(size=9), rng.normal(size=7)
    d, p = ks_2sample(a, b)
    d2, p2 = ks_2sample(np.exp(a) * 3 + 1, np.exp(b) * 3 + 1)
    assert d == pytest.approx(d2) and p == pytest.approx(p2)
    assert 0 <= d <= 1 and 0 <= p <= 1
