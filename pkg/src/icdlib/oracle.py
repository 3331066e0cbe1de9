"""Perfect conditional-independence oracle via d-separation."""

from __future__ import annotations

from typing import Iterable

from .graph import CausalDag, GraphError, MixedGraph

_UP, _DOWN = 0, 1


def d_separated(dag: CausalDag, x: int, y: int, z: Iterable[int]) -> bool:
    """Test whether ``x`` and ``y`` are d-separated by ``z`` in ``dag``.

    Uses the reachability ("Bayes ball") traversal over (node, direction)
    states, linear in the number of edges.
    """
    z = set(z)
    for v in (x, y, *z):
        if not 0 <= v < dag.n:
            raise GraphError(f"node {v} out of range")
    if x == y:
        raise GraphError("x and y must differ")
    if x in z or y in z:
        raise GraphError("x and y must not be in the conditioning set")
    return _blocked(dag, dag.children, x, y, z)


class DSepOracle:
    """CI tester answering queries by d-separation in a ground-truth DAG.

    Queries are posed over PAG node indices ``0 .. |O|-1``; index ``i`` is the
    ``i``-th observed DAG node in ascending id order. The selection set of the
    DAG is always conditioned on.
    """

    def __init__(self, dag: CausalDag):
        self.dag = dag
        self.observed = dag.observed
        self._sel = set(dag.selection)
        # children lists are rebuilt per query otherwise
        self._children = dag.children

    @property
    def n_observed(self) -> int:
        return len(self.observed)

    def __call__(self, x: int, y: int, z: Iterable[int]) -> bool:
        obs = self.observed
        cond = {obs[v] for v in z} | self._sel
        return _blocked(self.dag, self._children, obs[x], obs[y], cond)


def _blocked(dag: CausalDag, children, x: int, y: int, z: set[int]) -> bool:
    # colliders inside z or its ancestors are open
    parents = dag.parents
    anc_z = set(z)
    stack = list(z)
    while stack:
        for p in parents[stack.pop()]:
            if p not in anc_z:
                anc_z.add(p)
                stack.append(p)
    seen: set[tuple[int, int]] = set()
    todo = [(x, _UP)]
    while todo:
        state = todo.pop()
        if state in seen:
            continue
        seen.add(state)
        v, d = state
        if v == y:
            return False
        if d == _UP:
            if v not in z:
                todo.extend((p, _UP) for p in parents[v])
                todo.extend((c, _DOWN) for c in children[v])
        else:
            if v not in z:
                todo.extend((c, _DOWN) for c in children[v])
            if v in anc_z:
                todo.extend((p, _UP) for p in parents[v])
    return True


def oracle_ci(o: DSepOracle, x: int, y: int, z: Iterable[int]) -> bool:
    """Independence verdict for observed DAG nodes ``x``, ``y`` given observed ``z``.

    Unlike calling the oracle directly, ids here are DAG node ids.
    """
    z = set(z)
    hidden = o.dag.latent | o.dag.selection
    bad = [v for v in (x, y, *z) if v in hidden]
    if bad:
        raise GraphError(f"query mentions unobserved nodes {sorted(bad)}")
    return d_separated(o.dag, x, y, z | o._sel)


def true_pag(dag: CausalDag) -> MixedGraph:
    """PAG of the observed Markov equivalence class of ``dag``.

    Computed as the output of complete FCI under the d-separation oracle.
    """
    from .fci import fci

    o = DSepOracle(dag)
    return fci(o.n_observed, o)
