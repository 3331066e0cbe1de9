"""FCI baseline: PC-style adjacency search, Possible-D-Sep stage, full orientation."""

from __future__ import annotations

from itertools import combinations
from typing import Callable, Iterable

from .graph import MixedGraph
from .orientation import SepsetRecord, orient, orient_v_structures_inplace
from .paths import shortest_pds_lengths

CiTest = Callable[[int, int, Iterable[int]], bool]


def fci_skeleton_phase1(
    n_nodes: int,
    ci: CiTest,
    max_cond: int | None = None,
    both_sides: bool = True,
) -> tuple[MixedGraph, SepsetRecord]:
    """Adjacency search over growing condition-set sizes.

    For size ``k`` every remaining edge ``x - y`` is tested against the
    size-``k`` subsets of ``adj(x) - {y}`` and then (with ``both_sides``) of
    ``adj(y) - {x}``, using the current adjacencies.
    """
    g = MixedGraph.complete(n_nodes)
    seps = SepsetRecord()
    top = max(n_nodes - 2, 0) if max_cond is None else max_cond
    k = 0
    while k <= top:
        enough = False
        for x, y in g.edges():
            if not g.is_adjacent(x, y):
                continue
            sides = ((x, y), (y, x)) if both_sides else ((x, y),)
            for a, b in sides:
                cand = sorted(g.neighbors(a) - {b})
                if len(cand) < k:
                    continue
                enough = True
                for z in combinations(cand, k):
                    if ci(x, y, z):
                        g.remove_edge(x, y)
                        seps.set(x, y, z)
                        break
                if not g.is_adjacent(x, y):
                    break
        if not enough:
            break
        k += 1
    return g, seps


def possible_d_sep(g: MixedGraph, a: int, b: int) -> set[int]:
    """Nodes joined to ``a`` by a path whose interior nodes are colliders or in triangles.

    ``a`` and ``b`` themselves are excluded from the result.
    """
    return set(shortest_pds_lengths(g, a)) - {a, b}


def fci_with_sepsets(
    n_nodes: int,
    ci: CiTest,
    max_cond: int | None = None,
    both_sides: bool = True,
    strict: bool = True,
) -> tuple[MixedGraph, SepsetRecord]:
    top = max(n_nodes - 2, 0) if max_cond is None else max_cond
    g, seps = fci_skeleton_phase1(n_nodes, ci, top, both_sides)

    oriented = g.copy()
    orient_v_structures_inplace(oriented, seps, strict)
    pds = {a: set(shortest_pds_lengths(oriented, a)) - {a} for a in range(n_nodes)}

    for x, y in g.edges():
        if not g.is_adjacent(x, y):
            continue
        for a in (x, y):
            cand = sorted(pds[a] - {x, y})
            for k in range(min(len(cand), top) + 1):
                if _first_separating(ci, x, y, cand, k, g, seps):
                    break
            if not g.is_adjacent(x, y):
                break

    orient(g, seps, strict)
    return g, seps


def _first_separating(ci, x, y, cand, k, g, seps) -> bool:
    for z in combinations(cand, k):
        if ci(x, y, z):
            g.remove_edge(x, y)
            seps.set(x, y, z)
            return True
    return False


def fci(
    n_nodes: int,
    ci: CiTest,
    max_cond: int | None = None,
    both_sides: bool = True,
    strict: bool = True,
) -> MixedGraph:
    """Learn a PAG with FCI.

    Parameters
    ----------
    n_nodes : int
        Number of observed variables.
    ci : callable
        ``ci(x, y, z) -> bool``, ``True`` meaning independent.
    max_cond : int, optional
        Largest condition-set size; defaults to ``n_nodes - 2``.
    both_sides : bool
        Draw phase-one condition sets from both endpoints' adjacencies.
    strict : bool
        Raise on conflicting orientations instead of skipping them.
    """
    return fci_with_sepsets(n_nodes, ci, max_cond, both_sides, strict)[0]
