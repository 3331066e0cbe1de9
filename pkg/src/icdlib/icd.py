"""Iterative causal discovery (ICD).

Each iteration ``r`` tests every remaining edge ``x - y`` against condition
sets of exactly ``r`` nodes, drawn from nodes within PDS-path distance ``r``
of ``x`` or ``y`` in the current PAG. Candidate sets are tried in order of
their mean distance from ``x``. After each iteration the graph is reoriented
from scratch, so the PAG returned after any iteration is a valid (if less
informative) answer.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import chain, combinations, product
from typing import Callable, Iterable, Iterator

from .graph import GraphError, MixedGraph
from .orientation import SepsetRecord, orient
from .paths import nodes_on_paths, shortest_pds_lengths

CiTest = Callable[[int, int, Iterable[int]], bool]


@dataclass
class IcdConfig:
    """ICD run parameters.

    Attributes
    ----------
    r0 : int
        First condition-set size.
    n_max : int or None
        Largest condition-set size; ``None`` means ``|O| - 2``.
    ordering : {"eq1", "lexicographic"}
        Order in which candidate condition sets are tried: ``"eq1"`` sorts
        by mean path distance of the members (ties lexicographic).
    pds_restrict : bool
        Require every node on a PDS-path to lie on some path between the
        tested pair (the "strict" reading). ``False`` drops that condition.
    closure : bool
        Keep only sets whose every member is reachable from one endpoint by
        PDS-paths running inside the set. A separating set with this shape
        always exists when any size-``r`` one does, so this only prunes tests.
    strict : bool
        Raise on conflicting orientations instead of skipping them.
    """

    r0: int = 0
    n_max: int | None = None
    ordering: str = "eq1"
    pds_restrict: bool = True
    closure: bool = True
    strict: bool = True

    def resolve_n_max(self, n_nodes: int) -> int:
        top = max(n_nodes - 2, 0)
        n_max = top if self.n_max is None else self.n_max
        if not 0 <= self.r0 <= n_max <= top:
            raise ValueError(f"need 0 <= r0 <= n_max <= {top}, got r0={self.r0}, n_max={n_max}")
        if self.ordering not in ("eq1", "lexicographic"):
            raise ValueError(f"unknown ordering {self.ordering!r}")
        return n_max


@dataclass(frozen=True)
class CandidateSet:
    nodes: tuple[int, ...]
    score: float


def pds_distances(
    g: MixedGraph,
    a: int,
    b: int,
    restrict: bool = True,
    max_depth: int | None = None,
) -> dict[int, int]:
    """Shortest PDS-path length (in edges) from ``a`` to each reachable node, w.r.t. ``b``.

    Paths never pass through ``b``. With ``restrict`` every path node must
    lie on some path between ``a`` and ``b``.
    """
    if a == b:
        raise GraphError("a and b must differ")
    allowed = nodes_on_paths(g, a, b) if restrict else None
    return shortest_pds_lengths(g, a, allowed=allowed, stop_at=b, max_depth=max_depth)


def _candidate_distances(g, x, y, r, restrict):
    allowed = nodes_on_paths(g, x, y) if restrict else None
    dx = shortest_pds_lengths(g, x, allowed=allowed, stop_at=y)
    dy = shortest_pds_lengths(g, y, allowed=allowed, stop_at=x)
    pool = sorted(
        z for z in set(dx) | set(dy)
        if z not in (x, y) and min(dx.get(z, r + 1), dy.get(z, r + 1)) <= r
    )
    # ranking uses distances from the smaller endpoint, falling back to the other
    anchor, other = (dx, dy) if x < y else (dy, dx)
    rank = {z: anchor.get(z, other.get(z)) for z in pool}
    return pool, rank


def iter_candidates(
    g: MixedGraph,
    x: int,
    y: int,
    r: int,
    ordering: str = "eq1",
    restrict: bool = True,
    closure: bool = False,
) -> Iterator[CandidateSet]:
    """Lazily yield the ordered candidate condition sets for edge ``x - y``."""
    for cand in _iter_candidates(g, x, y, r, ordering, restrict):
        if not closure or _pds_closed(g, x, y, cand.nodes):
            yield cand


def _pds_closed(g: MixedGraph, x: int, y: int, zs: tuple[int, ...]) -> bool:
    """Every member of ``zs`` is reachable from ``x`` or ``y`` by a PDS-path inside ``zs``."""
    inside = set(zs)
    if inside <= set(shortest_pds_lengths(g, x, allowed=inside, stop_at=y)):
        return True
    return inside <= set(shortest_pds_lengths(g, y, allowed=inside, stop_at=x))


def _iter_candidates(g, x, y, r, ordering, restrict):
    if not g.is_adjacent(x, y):
        raise GraphError(f"nodes {x} and {y} are not adjacent")
    if r < 0:
        raise ValueError("r must be non-negative")
    if r == 0:
        yield CandidateSet((), 0.0)
        return
    pool, rank = _candidate_distances(g, x, y, r, restrict)
    if len(pool) < r:
        return
    if ordering == "lexicographic":
        for zs in combinations(pool, r):
            yield CandidateSet(zs, sum(rank[z] for z in zs) / r)
        return

    # eq1: ascending mean distance, ties lexicographic. Sets with the same
    # distance total are built from per-distance-class combinations.
    classes: dict[int, list[int]] = {}
    for z in pool:
        classes.setdefault(rank[z], []).append(z)
    levels = sorted(classes)
    by_total: dict[int, list[tuple[int, ...]]] = {}
    for counts in _count_vectors([len(classes[d]) for d in levels], r):
        total = sum(d * k for d, k in zip(levels, counts))
        by_total.setdefault(total, []).append(counts)
    for total in sorted(by_total):
        sets = []
        for counts in by_total[total]:
            parts = [combinations(classes[d], k) for d, k in zip(levels, counts)]
            sets.extend(tuple(sorted(chain.from_iterable(p))) for p in product(*parts))
        sets.sort()
        for zs in sets:
            yield CandidateSet(zs, total / r)


def _count_vectors(caps: list[int], r: int) -> Iterator[tuple[int, ...]]:
    if not caps:
        if r == 0:
            yield ()
        return
    for k in range(min(caps[0], r) + 1):
        for rest in _count_vectors(caps[1:], r - k):
            yield (k,) + rest


def pdsep_r(
    g: MixedGraph,
    x: int,
    y: int,
    r: int,
    ordering: str = "eq1",
    restrict: bool = True,
    closure: bool = True,
) -> list[CandidateSet]:
    """All size-``r`` candidate condition sets for ``x - y``, in test order."""
    return list(iter_candidates(g, x, y, r, ordering, restrict, closure))


def icd_iteration(
    g: MixedGraph,
    seps: SepsetRecord,
    r: int,
    ci: CiTest,
    cfg: IcdConfig | None = None,
) -> tuple[MixedGraph, bool]:
    """One refinement pass at condition-set size ``r``.

    ``g`` and ``seps`` are updated in place; the (same) graph is returned with
    ``done=True`` when no edge had any candidate set.
    """
    cfg = cfg or IcdConfig()
    done = True
    for x, y in g.edges():
        if not g.is_adjacent(x, y):
            continue
        cands = iter_candidates(g, x, y, r, cfg.ordering, cfg.pds_restrict, cfg.closure)
        for cand in cands:
            done = False
            if ci(x, y, cand.nodes):
                g.remove_edge(x, y)
                seps.set(x, y, cand.nodes)
                break
    orient(g, seps, cfg.strict)
    return g, done


def iter_icd(
    n_nodes: int,
    ci: CiTest,
    cfg: IcdConfig | None = None,
    initial: MixedGraph | None = None,
) -> Iterator[tuple[int, MixedGraph, SepsetRecord]]:
    """Run ICD, yielding ``(r, pag, sepsets)`` after every completed iteration.

    The yielded graph is a snapshot; stopping the generator early leaves a
    valid anytime answer in the last snapshot.
    """
    cfg = cfg or IcdConfig()
    n_max = cfg.resolve_n_max(n_nodes)
    g = MixedGraph.complete(n_nodes) if initial is None else initial.copy()
    if g.n != n_nodes:
        raise GraphError("initial graph has the wrong node count")
    seps = SepsetRecord()
    for r in range(cfg.r0, n_max + 1):
        g, done = icd_iteration(g, seps, r, ci, cfg)
        yield r, g.copy(), seps.copy()
        if done:
            break


def icd_main(
    n_nodes: int,
    ci: CiTest,
    cfg: IcdConfig | None = None,
    initial: MixedGraph | None = None,
) -> MixedGraph:
    """Run ICD to completion (or ``cfg.n_max``) and return the final PAG."""
    g = MixedGraph.complete(n_nodes) if initial is None else initial.copy()
    for _, g, _ in iter_icd(n_nodes, ci, cfg, initial):
        pass
    return g
