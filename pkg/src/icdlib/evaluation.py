"""Scoring: structural errors, empirical CDFs and the two-sample KS test."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import GraphError, MixedGraph


@dataclass(frozen=True)
class StructuralErrors:
    extra_edges: int
    missing_edges: int
    wrong_marks: int

    @property
    def total(self) -> int:
        return self.extra_edges + self.missing_edges + self.wrong_marks


def structural_errors(learned: MixedGraph, truth: MixedGraph) -> StructuralErrors:
    """Extra edges, missing edges, and differing end marks on shared edges.

    Marks are counted per endpoint, so a shared edge contributes 0, 1 or 2.
    """
    if learned.n != truth.n:
        raise GraphError(f"node-count mismatch: {learned.n} vs {truth.n}")
    le, te = learned.skeleton(), truth.skeleton()
    wrong = 0
    for a, b in le & te:
        wrong += learned.mark(a, b) != truth.mark(a, b)
        wrong += learned.mark(b, a) != truth.mark(b, a)
    return StructuralErrors(len(le - te), len(te - le), wrong)


class Ecdf:
    """Empirical CDF ``F(t) = #{x <= t} / n`` of a sample."""

    def __init__(self, sample):
        self.values = np.sort(np.asarray(sample, dtype=float).ravel())
        if self.values.size == 0:
            raise ValueError("empty sample")

    def __call__(self, t):
        return np.searchsorted(self.values, t, side="right") / self.values.size

    def quantile(self, q: float) -> float:
        return ecdf_quantile(self, q)


def ecdf_quantile(e: Ecdf, q: float) -> float:
    """Smallest sample value ``t`` with ``F(t) >= q``."""
    if not 0 < q <= 1:
        raise ValueError("q must lie in (0, 1]")
    n = e.values.size
    # F(values[k]) >= (k + 1) / n, with equality at the last copy of a tie
    k = max(math.ceil(q * n - 1e-9) - 1, 0)
    return float(e.values[k])


def ks_statistic(a, b) -> float:
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    if a.size == 0 or b.size == 0:
        raise ValueError("both samples must be non-empty")
    grid = np.concatenate([a, b])
    fa = np.searchsorted(a, grid, side="right") / a.size
    fb = np.searchsorted(b, grid, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))


def kolmogorov_sf(lam: float) -> float:
    """Survival function of the limiting Kolmogorov distribution."""
    if lam <= 0:
        return 1.0
    if lam < 1.18:
        # small-lambda form converges fast where the alternating series does not
        s = 0.0
        c = math.pi**2 / (8 * lam * lam)
        for k in range(1, 101):
            term = math.exp(-((2 * k - 1) ** 2) * c)
            s += term
            if term < 1e-12:
                break
        return min(1.0, max(0.0, 1.0 - math.sqrt(2 * math.pi) / lam * s))
    s = 0.0
    for k in range(1, 101):
        term = math.exp(-2 * k * k * lam * lam)
        s += term if k % 2 else -term
        if term < 1e-12:
            break
    return min(1.0, max(0.0, 2.0 * s))


def _exact_ks_pvalue(m: int, n: int, d: float) -> float:
    # P(D >= d) under exchangeability, counting monotone lattice paths that
    # stay strictly inside |i/m - j/n| < d
    h = round(d * m * n)
    if h <= 0:
        return 1.0
    inside = [0] * (n + 1)
    for i in range(m + 1):
        for j in range(n + 1):
            if abs(i * n - j * m) >= h:
                inside[j] = 0
            elif i == 0 and j == 0:
                inside[j] = 1
            else:
                inside[j] = (inside[j] if i > 0 else 0) + (inside[j - 1] if j > 0 else 0)
    return min(1.0, max(0.0, 1.0 - inside[n] / math.comb(m + n, m)))


EXACT_LIMIT = 10_000


def ks_2sample(a, b) -> tuple[float, float]:
    """Two-sample Kolmogorov-Smirnov test.

    Returns ``(D, p)``. The p-value is exact (for continuous data) when
    ``m * n <= EXACT_LIMIT`` and otherwise uses the asymptotic Kolmogorov
    distribution at ``sqrt(m n / (m + n)) * D``.
    """
    d = ks_statistic(a, b)
    m, n = np.size(a), np.size(b)
    if m * n <= EXACT_LIMIT:
        return d, _exact_ks_pvalue(m, n, d)
    return d, kolmogorov_sf(math.sqrt(m * n / (m + n)) * d)
