"""Slow, definition-level reference implementations used as test oracles.

Nothing here imports the algorithmic modules of the package; only the graph
containers are shared.
"""

from __future__ import annotations

import math
from itertools import combinations, permutations, product

import numpy as np

from icdlib.graph import ARROW, TAIL, CausalDag, MixedGraph


def _dag_neighbors(dag: CausalDag):
    nb = [set() for _ in range(dag.n)]
    for a, b in dag.edges():
        nb[a].add(b)
        nb[b].add(a)
    return nb


def simple_paths(nb, x, y):
    """Every simple path from x to y in an undirected adjacency list."""
    out = []
    stack = [(x, [x])]
    while stack:
        v, path = stack.pop()
        if v == y:
            out.append(path)
            continue
        for w in nb[v]:
            if w not in path:
                stack.append((w, path + [w]))
    return out


def ancestors_of(dag: CausalDag, nodes) -> set[int]:
    """``nodes`` together with all their ancestors."""
    seen = set(nodes)
    stack = list(nodes)
    while stack:
        v = stack.pop()
        for p in dag.parents[v]:
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return seen


def dsep_by_paths(dag: CausalDag, x: int, y: int, z) -> bool:
    """d-separation by checking every undirected path against the blocking rules."""
    z = set(z)
    an_z = ancestors_of(dag, z)
    for path in simple_paths(_dag_neighbors(dag), x, y):
        active = True
        for u, v, w in zip(path, path[1:], path[2:]):
            collider = u in dag.parents[v] and w in dag.parents[v]
            if collider and v not in an_z:
                active = False
                break
            if not collider and v in z:
                active = False
                break
        if active:
            return False
    return True


def all_dags(n: int):
    pairs = list(combinations(range(n), 2))
    for choice in product((0, 1, 2), repeat=len(pairs)):
        edges = []
        for (a, b), c in zip(pairs, choice):
            if c == 1:
                edges.append((a, b))
            elif c == 2:
                edges.append((b, a))
        # acyclic iff some permutation orders every edge forward
        if any(all(pos[a] < pos[b] for a, b in edges)
               for pos in ({v: i for i, v in enumerate(p)} for p in permutations(range(n)))):
            yield CausalDag.from_edges(n, edges)


def random_dag_any_order(n: int, p: float, rng) -> CausalDag:
    order = rng.permutation(n)
    edges = [(int(order[i]), int(order[j])) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return CausalDag.from_edges(n, edges)


def random_mixed_graph(n: int, p: float, rng) -> MixedGraph:
    g = MixedGraph(n)
    for a, b in combinations(range(n), 2):
        if rng.random() < p:
            g.add_edge(a, b, int(rng.integers(1, 4)), int(rng.integers(1, 4)))
    return g


def _mg_neighbors(g: MixedGraph):
    return [g.neighbors(v) for v in range(g.n)]


def on_some_path(g: MixedGraph, a: int, b: int) -> set[int]:
    """Nodes on some simple path between a and b, where a - b counts as an edge."""
    nb = [set(s) for s in _mg_neighbors(g)]
    nb[a].add(b)
    nb[b].add(a)
    return {v for path in simple_paths(nb, a, b) for v in path}


def _qualifies(g: MixedGraph, path) -> bool:
    for u, v, w in zip(path, path[1:], path[2:]):
        collider = g.mark(u, v) == ARROW and g.mark(w, v) == ARROW
        if not (collider or g.is_adjacent(u, w)):
            return False
    return True


def _all_simple_from(g: MixedGraph, a: int):
    nb = _mg_neighbors(g)
    stack = [[a]]
    while stack:
        path = stack.pop()
        if len(path) > 1:
            yield path
        for w in nb[path[-1]]:
            if w not in path:
                stack.append(path + [w])


def pds_lengths_brute(g: MixedGraph, a: int, b: int | None = None, restrict: bool = False) -> dict[int, int]:
    """Shortest collider-or-triangle simple path from ``a`` to every node.

    With ``b`` given, ``b`` may only end a path. With ``restrict`` every path
    node must lie on a simple path between ``a`` and ``b``.
    """
    allowed = on_some_path(g, a, b) if restrict else None
    best: dict[int, int] = {}
    for path in _all_simple_from(g, a):
        if b is not None and b in path[1:-1]:
            continue
        if allowed is not None and not set(path) <= allowed:
            continue
        if _qualifies(g, path):
            t = path[-1]
            best[t] = min(best.get(t, math.inf), len(path) - 1)
    return best


def possible_d_sep_brute(g: MixedGraph, a: int, b: int) -> set[int]:
    return set(pds_lengths_brute(g, a)) - {a, b}


def separable(ci, x: int, y: int, others, max_size: int | None = None):
    """Smallest separating set of (x, y) among subsets of ``others``, or ``None``."""
    others = sorted(others)
    top = len(others) if max_size is None else min(max_size, len(others))
    for k in range(top + 1):
        for z in combinations(others, k):
            if ci(x, y, z):
                return z
    return None


def skeleton_brute(ci, n: int) -> set[tuple[int, int]]:
    return {(a, b) for a, b in combinations(range(n), 2)
            if separable(ci, a, b, set(range(n)) - {a, b}) is None}


def mag_marks(dag: CausalDag) -> dict[tuple[int, int], int]:
    """End marks of the MAG over observed nodes (indexed by observed position).

    Adjacency: no observed subset separates the pair (given the selection
    set). Mark at b on a - b: tail iff b is an ancestor of a or of S.
    """
    obs = dag.observed
    sel = set(dag.selection)

    def ci(i, j, zs):
        return dsep_by_paths(dag, obs[i], obs[j], {obs[k] for k in zs} | sel)

    marks = {}
    for i, j in skeleton_brute(ci, len(obs)):
        for s, t in ((i, j), (j, i)):
            anc = ancestors_of(dag, {obs[s]} | sel)
            marks[s, t] = TAIL if obs[t] in anc else ARROW
    return marks


def ks_permutation_pvalue(a, b) -> tuple[float, float]:
    """D and the exact permutation p-value ``P(D_perm >= D)`` over all splits."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    pooled = np.concatenate([a, b])
    m = a.size

    def stat(u, v):
        grid = np.concatenate([u, v])
        fu = (u[None, :] <= grid[:, None]).mean(axis=1)
        fv = (v[None, :] <= grid[:, None]).mean(axis=1)
        return float(np.max(np.abs(fu - fv)))

    d = stat(a, b)
    hits = total = 0
    for sel in combinations(range(pooled.size), m):
        mask = np.zeros(pooled.size, dtype=bool)
        mask[list(sel)] = True
        total += 1
        hits += stat(pooled[mask], pooled[~mask]) >= d - 1e-12
    return d, hits / total
