"""Shortest collider-or-triangle paths in a mixed graph.

A path ``<a, ..., t>`` qualifies when every interior node ``v`` with
neighbours ``u, w`` on the path is a collider (arrowheads at ``v`` on both
edges) or ``u`` and ``w`` are adjacent. Path lengths count edges and paths are
simple.

The search first runs a BFS over directed-edge states ``(prev, cur)``. That
BFS explores walks, so whenever the shortest walk to some node revisits a
node we fall back to an exact label search over simple paths.
"""

from __future__ import annotations

from collections import deque

import networkx as nx

from .graph import ARROW, MixedGraph


def _passable(g: MixedGraph, u: int, v: int, w: int) -> bool:
    return (g.mark(u, v) == ARROW and g.mark(w, v) == ARROW) or g.is_adjacent(u, w)


def nodes_on_paths(g: MixedGraph, a: int, b: int) -> set[int]:
    """All nodes lying on some simple undirected path between ``a`` and ``b``.

    A node is on such a path iff it shares a biconnected component with the
    (possibly virtual) edge ``a - b``.
    """
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    h.add_edge(a, b)
    for comp in nx.biconnected_components(h):
        if a in comp and b in comp:
            return set(comp)
    return {a, b}  # pragma: no cover - the a-b edge always lies in a block


def shortest_pds_lengths(
    g: MixedGraph,
    a: int,
    allowed: set[int] | None = None,
    stop_at: int | None = None,
    max_depth: int | None = None,
) -> dict[int, int]:
    """Length of the shortest qualifying simple path from ``a`` to every node.

    Parameters
    ----------
    allowed : set of int, optional
        Paths may only visit these nodes (``a`` excepted).
    stop_at : int, optional
        A node that may end a path but not be passed through.
    max_depth : int, optional
        Ignore paths longer than this.
    """
    ok = (lambda v: True) if allowed is None else allowed.__contains__
    if max_depth is not None and max_depth < 1:
        return {}

    parent: dict[tuple[int, int], tuple[int, int] | None] = {}
    first: dict[int, tuple[int, int]] = {}
    dist: dict[int, int] = {}
    queue: deque = deque()
    for nb in sorted(g.neighbors(a)):
        if ok(nb):
            st = (a, nb)
            parent[st] = None
            first[nb] = st
            dist[nb] = 1
            queue.append((st, 1))
    while queue:
        (p, c), d = queue.popleft()
        if c == stop_at or (max_depth is not None and d >= max_depth):
            continue
        for w in g.neighbors(c):
            if w == p or w == a or not ok(w):
                continue
            st = (c, w)
            if st in parent or not _passable(g, p, c, w):
                continue
            parent[st] = (p, c)
            queue.append((st, d + 1))
            if w not in dist:
                dist[w] = d + 1
                first[w] = st

    for st in first.values():
        seen = set()
        while st is not None:
            if st[1] in seen:
                return _exact_lengths(g, a, ok, stop_at, max_depth, set(dist))
            seen.add(st[1])
            st = parent[st]
    return dist


def _exact_lengths(g, a, ok, stop_at, max_depth, targets):
    # breadth-first over simple paths; a label (prev, cur, visited) is dropped
    # when an earlier label with the same (prev, cur) visited a subset of nodes
    exact: dict[int, int] = {}
    labels: dict[tuple[int, int], list[int]] = {}
    frontier = []
    for nb in sorted(g.neighbors(a)):
        if ok(nb):
            mask = (1 << a) | (1 << nb)
            labels[(a, nb)] = [mask]
            frontier.append((a, nb, mask))
    depth = 1
    while frontier:
        for _, c, _ in frontier:
            exact.setdefault(c, depth)
        if targets <= exact.keys() or (max_depth is not None and depth >= max_depth):
            break
        nxt = []
        for p, c, mask in frontier:
            if c == stop_at:
                continue
            for w in g.neighbors(c):
                if (mask >> w) & 1 or not ok(w) or not _passable(g, p, c, w):
                    continue
                nm = mask | (1 << w)
                prior = labels.setdefault((c, w), [])
                if any(m & ~nm == 0 for m in prior):
                    continue
                prior.append(nm)
                nxt.append((c, w, nm))
        frontier = nxt
        depth += 1
    return exact

