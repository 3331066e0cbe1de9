"""Conditional-independence testers and the caching/counting wrapper.

A CI tester is any callable ``tester(x, y, z) -> bool`` returning ``True``
for "independent". Testers must be symmetric in ``x`` and ``y`` and
deterministic for fixed inputs.
"""

from __future__ import annotations

import csv
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Protocol

import numpy as np
from scipy.special import ndtri

RHO_CLAMP = 1.0 - 1e-12


class CiTester(Protocol):
    def __call__(self, x: int, y: int, z: Iterable[int]) -> bool: ...


def ci_key(x: int, y: int, z: Iterable[int]) -> tuple[int, int, tuple[int, ...]]:
    """Canonical key: smaller endpoint first, condition set ascending."""
    cond = tuple(sorted(set(z)))
    if x == y:
        raise ValueError("x and y must differ")
    if x in cond or y in cond:
        raise ValueError("tested pair must not be in the condition set")
    return (x, y, cond) if x < y else (y, x, cond)


@dataclass
class DataSet:
    """Observed samples, one column per observed variable.

    Parameters
    ----------
    values : ndarray of shape (n_samples, n_vars)
    columns : list of int, optional
        Identifiers of the columns (e.g. DAG node ids); defaults to ``0..p-1``.
    """

    values: np.ndarray
    columns: list[int] | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2:
            raise ValueError("values must be a 2-D array")
        if self.columns is None:
            self.columns = list(range(self.values.shape[1]))
        if len(self.columns) != self.values.shape[1]:
            raise ValueError("one column id per column is required")

    @property
    def sample_count(self) -> int:
        return self.values.shape[0]

    @property
    def n_vars(self) -> int:
        return self.values.shape[1]

    @cached_property
    def covariance(self) -> np.ndarray:
        if self.sample_count < 2:
            return np.zeros((self.n_vars, self.n_vars))
        return np.cov(self.values, rowvar=False).reshape(self.n_vars, self.n_vars)

    @cached_property
    def correlation(self) -> np.ndarray:
        cov = self.covariance
        sd = np.sqrt(np.diag(cov))
        with np.errstate(divide="ignore", invalid="ignore"):
            corr = cov / np.outer(sd, sd)
        corr[~np.isfinite(corr)] = 0.0
        np.fill_diagonal(corr, 1.0)
        return corr


def _partial_corr(corr: np.ndarray, x: int, y: int, z: tuple[int, ...]) -> float:
    if not z:
        return float(np.clip(corr[x, y], -1.0, 1.0))
    idx = [x, y, *z]
    sub = corr[np.ix_(idx, idx)]
    try:
        prec = np.linalg.inv(sub)
        if not np.all(np.isfinite(prec)):
            raise np.linalg.LinAlgError
    except np.linalg.LinAlgError:
        prec = np.linalg.pinv(sub)
    denom = math.sqrt(abs(prec[0, 0] * prec[1, 1]))
    if denom == 0.0:
        return 1.0
    return float(np.clip(-prec[0, 1] / denom, -1.0, 1.0))


def partial_correlation(data: DataSet, x: int, y: int, z: Iterable[int] = ()) -> float:
    """Partial correlation of columns ``x`` and ``y`` given columns ``z``.

    Computed from the inverse of the correlation submatrix over
    ``{x, y} | z``; a pseudo-inverse is used when that submatrix is singular.
    """
    z = tuple(z)
    if x == y or x in z or y in z:
        raise ValueError("x, y and z must be disjoint")
    if len(z) + 2 > data.n_vars:
        raise ValueError("condition set too large for the data set")
    return _partial_corr(data.correlation, x, y, z)


def fisher_z_stat(rho: float, n_samples: int, cond_size: int) -> float:
    rho = max(-RHO_CLAMP, min(RHO_CLAMP, rho))
    return 0.5 * math.log((1 + rho) / (1 - rho)) * math.sqrt(n_samples - cond_size - 3)


def fisher_z_test(data: DataSet, x: int, y: int, z: Iterable[int] = (), alpha: float = 0.01) -> bool:
    """Fisher-z partial-correlation test; returns ``True`` for independent.

    With fewer than ``|z| + 4`` samples the test is underpowered and reports
    dependence.
    """
    z = tuple(z)
    if data.sample_count - len(z) - 3 <= 0:
        return False
    rho = partial_correlation(data, x, y, z)
    return abs(fisher_z_stat(rho, data.sample_count, len(z))) <= float(ndtri(1 - alpha / 2))


class FisherZ:
    """Fisher-z CI tester bound to one data set and significance level."""

    def __init__(self, data: DataSet, alpha: float = 0.01):
        if not 0 < alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        self.data = data
        self.alpha = alpha
        self._corr = data.correlation
        self._ell = data.sample_count
        self._crit = float(ndtri(1 - alpha / 2))

    def __call__(self, x: int, y: int, z: Iterable[int]) -> bool:
        z = tuple(z)
        if self._ell - len(z) - 3 <= 0:
            return False
        rho = _partial_corr(self._corr, x, y, z)
        return abs(fisher_z_stat(rho, self._ell, len(z))) <= self._crit


@dataclass
class CiStats:
    """Unique-test counters, per condition-set size."""

    by_size: Counter = field(default_factory=Counter)
    cache_hits: int = 0

    @property
    def total(self) -> int:
        return sum(self.by_size.values())

    def as_list(self) -> list[int]:
        top = max(self.by_size, default=-1)
        return [self.by_size.get(k, 0) for k in range(top + 1)]


class CiCache:
    """Caching, counting wrapper around a CI tester.

    Each canonical query is evaluated once; repeats are answered from the
    cache and only bump ``stats.cache_hits``. ``log`` (optional) receives one
    ``(x, y, cond, verdict, source)`` tuple per call.
    """

    def __init__(self, tester: Callable[[int, int, Iterable[int]], bool], log: list | None = None):
        self.tester = tester
        self.stats = CiStats()
        self.verdicts: dict[tuple, bool] = {}
        self.log = log

    def __call__(self, x: int, y: int, z: Iterable[int]) -> bool:
        key = ci_key(x, y, z)
        hit = key in self.verdicts
        if hit:
            self.stats.cache_hits += 1
            verdict = self.verdicts[key]
        else:
            verdict = bool(self.tester(*key))
            self.verdicts[key] = verdict
            self.stats.by_size[len(key[2])] += 1
        if self.log is not None:
            self.log.append((key[0], key[1], key[2], verdict, "cached" if hit else "fresh"))
        return verdict


def cached_test(cache: CiCache, x: int, y: int, z: Iterable[int]) -> bool:
    return cache(x, y, z)


def write_audit_log(path, log: Iterable[tuple]) -> None:
    """Write a CI audit log as CSV: ``x,y,cond_size,cond_set,verdict,source``."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "y", "cond_size", "cond_set", "verdict", "source"])
        for x, y, cond, verdict, source in log:
            w.writerow([x, y, len(cond), " ".join(map(str, cond)),
                        "independent" if verdict else "dependent", source])
