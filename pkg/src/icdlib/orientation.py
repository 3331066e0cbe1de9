"""V-structure orientation and the complete FCI orientation rules.

R1-R4 propagate arrowheads (R4 through discriminating paths), R5-R7 place
tails implied by selection, and R8-R10 complete the tails of ``o->`` edges.
They are applied in that grouping until no rule fires.

All rule functions edit the graph in place and report whether anything
changed. Public entry points work on a copy.
"""

from __future__ import annotations

import random
from collections import deque
from typing import Callable, Iterable

from .graph import ARROW, CIRCLE, TAIL, GraphError, MixedGraph, iter_unshielded_triples


class OrientationConflict(RuntimeError):
    """A rule tried to overwrite an arrowhead or tail with a different mark."""


class SepsetRecord:
    """Separating sets keyed by unordered node pair."""

    def __init__(self):
        self._sets: dict[tuple[int, int], frozenset] = {}

    @staticmethod
    def _key(x: int, y: int) -> tuple[int, int]:
        return (x, y) if x < y else (y, x)

    def set(self, x: int, y: int, z: Iterable[int]) -> None:
        z = frozenset(z)
        if x in z or y in z:
            raise ValueError("a separating set cannot contain the separated nodes")
        self._sets[self._key(x, y)] = z

    def get(self, x: int, y: int) -> frozenset | None:
        return self._sets.get(self._key(x, y))

    def __contains__(self, pair) -> bool:
        return self._key(*pair) in self._sets

    def __len__(self) -> int:
        return len(self._sets)

    def items(self):
        return sorted(self._sets.items())

    def copy(self) -> "SepsetRecord":
        s = SepsetRecord()
        s._sets = dict(self._sets)
        return s


def _apply(g: MixedGraph, changes: list[tuple[int, int, int]], strict: bool) -> bool:
    """Set ``mark at b on a *-* b`` for each ``(a, b, mark)``, all or nothing."""
    m = g._m
    todo = []
    for a, b, mark in changes:
        cur = m[a][b]
        if cur == mark:
            continue
        if cur != CIRCLE:
            if strict:
                raise OrientationConflict(
                    f"cannot set mark at {b} on edge {a}-{b} to {mark!r}: already {cur!r}"
                )
            return False
        todo.append((a, b, mark))
    for a, b, mark in todo:
        m[a][b] = int(mark)
    return bool(todo)


def _sepset(seps: SepsetRecord, x: int, y: int) -> frozenset:
    s = seps.get(x, y)
    if s is None:
        raise GraphError(f"no separating set recorded for non-adjacent pair ({x}, {y})")
    return s


def orient_v_structures_inplace(g: MixedGraph, seps: SepsetRecord, strict: bool = True) -> bool:
    changed = False
    for u, v, w in list(iter_unshielded_triples(g)):
        if v not in _sepset(seps, u, w):
            changed |= _apply(g, [(u, v, ARROW), (w, v, ARROW)], strict)
    return changed


def orient_v_structures(g: MixedGraph, seps: SepsetRecord, strict: bool = True) -> MixedGraph:
    """Put arrowheads at ``v`` for every unshielded ``u - v - w`` with ``v`` not in ``sepset(u, w)``."""
    h = g.copy()
    orient_v_structures_inplace(h, seps, strict)
    return h


# -- arrowhead rules -------------------------------------------------------------


def _r1(g, seps, strict):
    m, adj = g._m, g._adj
    changed = False
    for b in range(g.n):
        for a in sorted(adj[b]):
            if m[a][b] != ARROW:
                continue
            for c in sorted(adj[b]):
                if c != a and m[c][b] == CIRCLE and c not in adj[a]:
                    changed |= _apply(g, [(c, b, TAIL), (b, c, ARROW)], strict)
    return changed


def _r2(g, seps, strict):
    m, adj = g._m, g._adj
    changed = False
    for a in range(g.n):
        for c in sorted(adj[a]):
            if m[a][c] != CIRCLE:
                continue
            for b in sorted(adj[a] & adj[c]):
                if m[b][c] != ARROW:
                    continue
                # a -> b *-> c  or  a *-> b -> c
                if (m[b][a] == TAIL and m[a][b] == ARROW) or (m[a][b] == ARROW and m[c][b] == TAIL):
                    changed |= _apply(g, [(a, c, ARROW)], strict)
                    break
    return changed


def _r3(g, seps, strict):
    m, adj = g._m, g._adj
    changed = False
    for th in range(g.n):
        for b in sorted(adj[th]):
            if m[th][b] != CIRCLE:
                continue
            side = sorted(x for x in adj[th] & adj[b] if m[x][b] == ARROW and m[x][th] == CIRCLE)
            if any(c not in adj[a] for i, a in enumerate(side) for c in side[i + 1 :]):
                changed |= _apply(g, [(th, b, ARROW)], strict)
    return changed


def _discriminating_start(g: MixedGraph, a: int, b: int, c: int) -> int | None:
    """Start node of a discriminating path ``<th, ..., a, b, c>`` for ``b``, if any."""
    m, adj = g._m, g._adj
    visited = {a, b, c}
    queue = deque([a])
    while queue:
        v = queue.popleft()
        for u in sorted(adj[v]):
            if u in visited or m[u][v] != ARROW:
                continue
            if u not in adj[c]:
                return u
            # u must be a collider on the path and a parent of c
            if m[c][u] == TAIL and m[u][c] == ARROW and m[v][u] == ARROW:
                visited.add(u)
                queue.append(u)
    return None


def _r4(g, seps, strict):
    m, adj = g._m, g._adj
    changed = False
    for b in range(g.n):
        for c in sorted(adj[b]):
            if m[c][b] != CIRCLE:
                continue
            for a in sorted(adj[b] & adj[c]):
                if not (m[b][a] == ARROW and m[c][a] == TAIL and m[a][c] == ARROW):
                    continue
                th = _discriminating_start(g, a, b, c)
                if th is None:
                    continue
                if b in _sepset(seps, th, c):
                    changed |= _apply(g, [(c, b, TAIL), (b, c, ARROW)], strict)
                else:
                    changed |= _apply(g, [(a, b, ARROW), (c, b, ARROW), (b, c, ARROW)], strict)
                break
    return changed


# -- selection-bias tail rules ---------------------------------------------------


def _circle_edge(m, u, v) -> bool:
    return m[u][v] == CIRCLE and m[v][u] == CIRCLE


def _uncovered_circle_path(g: MixedGraph, a: int, b: int) -> list[int] | None:
    m, adj = g._m, g._adj

    def extend(path):
        p, c = path[-2], path[-1]
        for w in sorted(adj[c]):
            if w in path or not _circle_edge(m, c, w) or w in adj[p]:
                continue
            if w == b:
                if c not in adj[a] and len(path) >= 3:
                    return path + [b]
                continue
            found = extend(path + [w])
            if found:
                return found
        return None

    for first in sorted(adj[a]):
        if first != b and first not in adj[b] and _circle_edge(m, a, first):
            found = extend([a, first])
            if found:
                return found
    return None


def _r5(g, seps, strict):
    m, adj = g._m, g._adj
    changed = False
    for a in range(g.n):
        for b in sorted(adj[a]):
            if b < a or not _circle_edge(m, a, b):
                continue
            path = _uncovered_circle_path(g, a, b)
            if path is None:
                continue
            changes = [(a, b, TAIL), (b, a, TAIL)]
            for u, v in zip(path, path[1:]):
                changes += [(u, v, TAIL), (v, u, TAIL)]
            changed |= _apply(g, changes, strict)
    return changed


def _r6(g, seps, strict):
    m, adj = g._m, g._adj
    changed = False
    for b in range(g.n):
        for a in sorted(adj[b]):
            if m[a][b] == TAIL and m[b][a] == TAIL:
                for c in sorted(adj[b]):
                    if c != a and m[c][b] == CIRCLE:
                        changed |= _apply(g, [(c, b, TAIL)], strict)
    return changed


def _r7(g, seps, strict):
    m, adj = g._m, g._adj
    changed = False
    for b in range(g.n):
        for a in sorted(adj[b]):
            if m[b][a] == TAIL and m[a][b] == CIRCLE:
                for c in sorted(adj[b]):
                    if c != a and c not in adj[a] and m[c][b] == CIRCLE:
                        changed |= _apply(g, [(c, b, TAIL)], strict)
    return changed


# -- tail rules for o-> edges -----------------------------------------------------


def _pd_edge(m, u, v) -> bool:
    """Edge ``u *-* v`` can be traversed from ``u`` on a potentially directed path."""
    return m[v][u] != ARROW and m[u][v] != TAIL


def _uncovered_pd_path_exists(g: MixedGraph, path: list[int], target: int) -> bool:
    """Extend the uncovered potentially directed ``path`` until it reaches ``target``."""
    m, adj = g._m, g._adj
    p, c = path[-2], path[-1]
    for w in sorted(adj[c]):
        if w in path or w in adj[p] or not _pd_edge(m, c, w):
            continue
        if w == target or _uncovered_pd_path_exists(g, path + [w], target):
            return True
    return False


def _o_arrows(g):
    m, adj = g._m, g._adj
    return [(a, c) for a in range(g.n) for c in sorted(adj[a]) if m[a][c] == ARROW and m[c][a] == CIRCLE]


def _r8(g, seps, strict):
    m, adj = g._m, g._adj
    changed = False
    for a, c in _o_arrows(g):
        for b in sorted(adj[a] & adj[c]):
            # a -> b -> c  or  a -o b -> c
            if m[b][c] == ARROW and m[c][b] == TAIL and m[b][a] == TAIL and m[a][b] in (ARROW, CIRCLE):
                changed |= _apply(g, [(c, a, TAIL)], strict)
                break
    return changed


def _r9(g, seps, strict):
    m, adj = g._m, g._adj
    changed = False
    for a, c in _o_arrows(g):
        if m[c][a] != CIRCLE:
            continue
        for b in sorted(adj[a]):
            if b == c or b in adj[c] or not _pd_edge(m, a, b):
                continue
            if _uncovered_pd_path_exists(g, [a, b], c):
                changed |= _apply(g, [(c, a, TAIL)], strict)
                break
    return changed


def _first_steps(g: MixedGraph, a: int, target: int) -> set[int]:
    """Second nodes of uncovered potentially directed paths from ``a`` to ``target``."""
    m, adj = g._m, g._adj
    out = set()
    for mu in adj[a]:
        if not _pd_edge(m, a, mu):
            continue
        if mu == target or _uncovered_pd_path_exists(g, [a, mu], target):
            out.add(mu)
    return out


def _r10(g, seps, strict):
    m, adj = g._m, g._adj
    changed = False
    for a, c in _o_arrows(g):
        if m[c][a] != CIRCLE:
            continue
        pars = sorted(x for x in adj[c] if x != a and m[c][x] == TAIL and m[x][c] == ARROW)
        if len(pars) < 2:
            continue
        firsts = {x: _first_steps(g, a, x) for x in pars}
        hit = any(
            mu != om and om not in adj[mu]
            for i, beta in enumerate(pars)
            for theta in pars[i + 1 :]
            for mu in firsts[beta]
            for om in firsts[theta]
        )
        if hit:
            changed |= _apply(g, [(c, a, TAIL)], strict)
    return changed


RULES: dict[int, Callable] = {
    1: _r1, 2: _r2, 3: _r3, 4: _r4, 5: _r5, 6: _r6, 7: _r7, 8: _r8, 9: _r9, 10: _r10,
}
_PHASES = ((1, 2, 3, 4), (5, 6, 7), (8, 9, 10))


def apply_rules_inplace(
    g: MixedGraph,
    seps: SepsetRecord,
    strict: bool = True,
    rng: random.Random | None = None,
) -> None:
    while True:
        changed_any = False
        for phase in _PHASES:
            order = list(phase)
            while True:
                if rng is not None:
                    rng.shuffle(order)
                changed = False
                for r in order:
                    changed |= RULES[r](g, seps, strict)
                if not changed:
                    break
                changed_any = True
        if not changed_any:
            return


def apply_rules(
    g: MixedGraph,
    seps: SepsetRecord,
    strict: bool = True,
    rng: random.Random | None = None,
) -> MixedGraph:
    """Apply R1-R10 to a graph with oriented v-structures until no rule fires.

    Only circle marks are overwritten. With ``strict=True`` an attempt to
    overwrite an arrowhead or tail raises :class:`OrientationConflict`;
    otherwise the offending orientation is skipped (useful with noisy CI
    tests). ``rng`` randomises the rule order within each group.
    """
    h = g.copy()
    apply_rules_inplace(h, seps, strict, rng)
    return h


def orient(g: MixedGraph, seps: SepsetRecord, strict: bool = True) -> None:
    """Reset ``g`` to circles, then orient v-structures and apply all rules, in place."""
    g.reset_marks(CIRCLE)
    orient_v_structures_inplace(g, seps, strict)
    apply_rules_inplace(g, seps, strict)
