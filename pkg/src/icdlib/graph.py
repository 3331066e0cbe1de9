"""Graph types shared by the discovery algorithms.

Two representations live here:

* :class:`CausalDag` -- the ground-truth DAG over observed, latent and
  selection nodes.
* :class:`MixedGraph` -- a PAG/MAG over observed nodes, stored as a dense
  end-mark table.

Nodes are integers. For a mixed graph ``g``, ``g.mark(a, b)`` is the mark at
the ``b`` end of the edge ``a *-* b``, so ``a *-> b`` reads
``g.mark(a, b) == ARROW``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterable, Iterator, Sequence


class EdgeMark(IntEnum):
    CIRCLE = 1
    ARROW = 2
    TAIL = 3


CIRCLE = EdgeMark.CIRCLE
ARROW = EdgeMark.ARROW
TAIL = EdgeMark.TAIL

# mark symbols as written at the left / right end of an edge token
_LEFT = {CIRCLE: "o", ARROW: "<", TAIL: "-"}
_RIGHT = {CIRCLE: "o", ARROW: ">", TAIL: "-"}
_LEFT_INV = {v: k for k, v in _LEFT.items()}
_RIGHT_INV = {v: k for k, v in _RIGHT.items()}


class GraphError(ValueError):
    """Raised on malformed graphs or violated graph preconditions."""


class MixedGraph:
    """Mixed graph with circle / arrowhead / tail end marks.

    Parameters
    ----------
    n : int
        Number of nodes. Nodes are ``0 .. n-1``.
    names : sequence of str, optional
        Display names; positional identity is what matters.
    """

    __slots__ = ("n", "_m", "_adj", "names")

    def __init__(self, n: int, names: Sequence[str] | None = None):
        if n < 0:
            raise GraphError("node count must be non-negative")
        self.n = n
        # _m[a][b]: mark at b on edge a *-* b, 0 when absent
        self._m = [[0] * n for _ in range(n)]
        self._adj: list[set[int]] = [set() for _ in range(n)]
        self.names = list(names) if names is not None else None

    @classmethod
    def complete(cls, n: int, mark: EdgeMark = CIRCLE) -> "MixedGraph":
        g = cls(n)
        for a in range(n):
            for b in range(a + 1, n):
                g.add_edge(a, b, mark, mark)
        return g

    def _check(self, a: int) -> None:
        if not 0 <= a < self.n:
            raise GraphError(f"node {a} out of range for {self.n}-node graph")

    def add_edge(self, a: int, b: int, mark_a: EdgeMark = CIRCLE, mark_b: EdgeMark = CIRCLE) -> None:
        """Add (or overwrite) the edge ``a *-* b`` with the given end marks."""
        self._check(a)
        self._check(b)
        if a == b:
            raise GraphError("self-loops are not allowed")
        self._m[b][a] = int(mark_a)
        self._m[a][b] = int(mark_b)
        self._adj[a].add(b)
        self._adj[b].add(a)

    def remove_edge(self, a: int, b: int) -> None:
        if b not in self._adj[a]:
            raise GraphError(f"no edge between {a} and {b}")
        self._m[a][b] = self._m[b][a] = 0
        self._adj[a].discard(b)
        self._adj[b].discard(a)

    def is_adjacent(self, a: int, b: int) -> bool:
        return b in self._adj[a]

    def neighbors(self, a: int) -> set[int]:
        return self._adj[a]

    def mark(self, a: int, b: int) -> int:
        """Mark at ``b`` on the edge ``a *-* b`` (0 when not adjacent)."""
        return self._m[a][b]

    def set_mark(self, a: int, b: int, mark: EdgeMark) -> None:
        if b not in self._adj[a]:
            raise GraphError(f"no edge between {a} and {b}")
        self._m[a][b] = int(mark)

    def edges(self) -> list[tuple[int, int]]:
        """Adjacent pairs ``(a, b)`` with ``a < b``, in lexicographic order."""
        return [(a, b) for a in range(self.n) for b in sorted(self._adj[a]) if a < b]

    def num_edges(self) -> int:
        return sum(len(s) for s in self._adj) // 2

    def reset_marks(self, mark: EdgeMark = CIRCLE) -> None:
        for a in range(self.n):
            for b in self._adj[a]:
                self._m[a][b] = int(mark)

    def has_circles(self) -> bool:
        return any(self._m[a][b] == CIRCLE for a in range(self.n) for b in self._adj[a])

    def copy(self) -> "MixedGraph":
        g = MixedGraph.__new__(MixedGraph)
        g.n = self.n
        g._m = [row[:] for row in self._m]
        g._adj = [set(s) for s in self._adj]
        g.names = list(self.names) if self.names is not None else None
        return g

    def skeleton(self) -> set[tuple[int, int]]:
        return set(self.edges())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MixedGraph):
            return NotImplemented
        return graph_equal(self, other)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"MixedGraph(n={self.n}, edges={self.num_edges()})"

    def edge_token(self, a: int, b: int) -> str:
        return _LEFT[EdgeMark(self._m[b][a])] + "-" + _RIGHT[EdgeMark(self._m[a][b])]

    def to_text(self) -> str:
        lines = [f"pag {self.n}"]
        lines += [f"{a} {self.edge_token(a, b)} {b}" for a, b in self.edges()]
        return "\n".join(lines) + "\n"

    def __str__(self) -> str:
        return self.to_text()


@dataclass(frozen=True)
class CausalDag:
    """Ground-truth DAG over ``V = O | L | S``.

    ``parents[i]`` is the parent set of node ``i``. Nodes not listed as latent
    or selection are observed.
    """

    n: int
    parents: tuple[frozenset, ...]
    latent: frozenset = field(default_factory=frozenset)
    selection: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if len(self.parents) != self.n:
            raise GraphError("parents table must have one entry per node")
        for v, ps in enumerate(self.parents):
            for p in ps:
                if not 0 <= p < self.n:
                    raise GraphError(f"parent {p} of {v} out of range")
                if p == v:
                    raise GraphError(f"self-loop at {v}")
        for s in (self.latent, self.selection):
            for v in s:
                if not 0 <= v < self.n:
                    raise GraphError(f"node {v} out of range")
        if self.latent & self.selection:
            raise GraphError("latent and selection sets overlap")
        if _topological_order(self.n, self.parents) is None:
            raise GraphError("edge set contains a directed cycle")

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        latent: Iterable[int] = (),
        selection: Iterable[int] = (),
    ) -> "CausalDag":
        parents: list[set[int]] = [set() for _ in range(n)]
        for a, b in edges:
            if not (0 <= a < n and 0 <= b < n):
                raise GraphError(f"edge {a}->{b} out of range")
            parents[b].add(a)
        return cls(n, tuple(frozenset(p) for p in parents), frozenset(latent), frozenset(selection))

    @property
    def observed(self) -> list[int]:
        """Observed node ids, ascending. Position ``i`` is PAG node ``i``."""
        hidden = self.latent | self.selection
        return [v for v in range(self.n) if v not in hidden]

    @property
    def children(self) -> list[set[int]]:
        ch: list[set[int]] = [set() for _ in range(self.n)]
        for v, ps in enumerate(self.parents):
            for p in ps:
                ch[p].add(v)
        return ch

    def edges(self) -> list[tuple[int, int]]:
        return sorted((p, v) for v, ps in enumerate(self.parents) for p in ps)

    def topological_order(self) -> list[int]:
        order = _topological_order(self.n, self.parents)
        assert order is not None
        return order

    def descendants(self, v: int) -> set[int]:
        ch = self.children
        out, stack = set(), [v]
        while stack:
            for c in ch[stack.pop()]:
                if c not in out:
                    out.add(c)
                    stack.append(c)
        return out

    def with_hidden(self, latent: Iterable[int] = (), selection: Iterable[int] = ()) -> "CausalDag":
        return CausalDag(self.n, self.parents, frozenset(latent), frozenset(selection))

    def to_text(self) -> str:
        def fmt(nodes):
            return ",".join(str(v) for v in sorted(nodes))

        head = f"dag {self.n} obs={fmt(self.observed)} lat={fmt(self.latent)} sel={fmt(self.selection)}"
        return "\n".join([head] + [f"{a} -> {b}" for a, b in self.edges()]) + "\n"


def _topological_order(n: int, parents: Sequence[Iterable[int]]) -> list[int] | None:
    indeg = [len(set(p)) for p in parents]
    children: list[list[int]] = [[] for _ in range(n)]
    for v, ps in enumerate(parents):
        for p in set(ps):
            children[p].append(v)
    ready = [v for v in range(n) if indeg[v] == 0]
    order = []
    while ready:
        v = ready.pop()
        order.append(v)
        for c in children[v]:
            indeg[c] -= 1
            if indeg[c] == 0:
                ready.append(c)
    return order if len(order) == n else None


def _require_adjacent(g: MixedGraph, a: int, b: int) -> None:
    if not g.is_adjacent(a, b):
        raise GraphError(f"nodes {a} and {b} are not adjacent")


def is_collider(g: MixedGraph, u: int, v: int, w: int) -> bool:
    """True iff both edges ``u *-* v`` and ``v *-* w`` have an arrowhead at ``v``."""
    _require_adjacent(g, u, v)
    _require_adjacent(g, v, w)
    if u == w:
        raise GraphError("collider endpoints must differ")
    return g.mark(u, v) == ARROW and g.mark(w, v) == ARROW


def forms_triangle(g: MixedGraph, u: int, v: int, w: int) -> bool:
    if len({u, v, w}) != 3:
        raise GraphError("triangle nodes must be distinct")
    return g.is_adjacent(u, v) and g.is_adjacent(v, w) and g.is_adjacent(u, w)


def max_in_degree(d: CausalDag) -> int:
    return max((len(p) for p in d.parents), default=0)


def graph_equal(a: MixedGraph, b: MixedGraph) -> bool:
    """Identical adjacency and identical end marks on every edge."""
    if a.n != b.n:
        raise GraphError(f"node-count mismatch: {a.n} vs {b.n}")
    return a._m == b._m


# -- text format ---------------------------------------------------------------


def _parse_list(field_: str, key: str) -> list[int]:
    if not field_.startswith(key + "="):
        raise GraphError(f"expected '{key}=' in header, got {field_!r}")
    body = field_[len(key) + 1 :]
    return [int(t) for t in body.split(",") if t]


def parse_graph(text: str) -> MixedGraph | CausalDag:
    """Parse the one-edge-per-line text format (``pag`` or ``dag`` header)."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise GraphError("empty graph text")
    head = lines[0].split()
    try:
        n = int(head[1])
    except (IndexError, ValueError) as e:
        raise GraphError(f"bad header line {lines[0]!r}") from e

    if head[0] == "pag":
        g = MixedGraph(n)
        for ln in lines[1:]:
            a, tok, b = _split_edge(ln)
            if len(tok) != 3 or tok[1] != "-" or tok[0] not in _LEFT_INV or tok[2] not in _RIGHT_INV:
                raise GraphError(f"bad edge token in {ln!r}")
            g.add_edge(a, b, _LEFT_INV[tok[0]], _RIGHT_INV[tok[2]])
        return g

    if head[0] == "dag":
        if len(head) != 5:
            raise GraphError(f"bad dag header {lines[0]!r}")
        obs = _parse_list(head[2], "obs")
        lat = _parse_list(head[3], "lat")
        sel = _parse_list(head[4], "sel")
        if sorted(obs + lat + sel) != list(range(n)):
            raise GraphError("obs/lat/sel must partition the nodes")
        edges = []
        for ln in lines[1:]:
            a, tok, b = _split_edge(ln)
            if tok != "->":
                raise GraphError(f"dag edges must be written 'A -> B', got {ln!r}")
            edges.append((a, b))
        return CausalDag.from_edges(n, edges, lat, sel)

    raise GraphError(f"unknown graph kind {head[0]!r}")


def _split_edge(line: str) -> tuple[int, str, int]:
    parts = line.split()
    if len(parts) != 3:
        raise GraphError(f"bad edge line {line!r}")
    try:
        return int(parts[0]), parts[1], int(parts[2])
    except ValueError as e:
        raise GraphError(f"bad node id in {line!r}") from e


def read_graph(path) -> MixedGraph | CausalDag:
    with open(path) as fh:
        return parse_graph(fh.read())


def write_graph(path, g: MixedGraph | CausalDag) -> None:
    with open(path, "w") as fh:
        fh.write(g.to_text())


def iter_unshielded_triples(g: MixedGraph) -> Iterator[tuple[int, int, int]]:
    """Yield ``(u, v, w)`` with ``u < w``, both adjacent to ``v``, ``u`` and ``w`` not adjacent."""
    for v in range(g.n):
        nb = sorted(g.neighbors(v))
        for i, u in enumerate(nb):
            for w in nb[i + 1 :]:
                if not g.is_adjacent(u, w):
                    yield u, v, w
