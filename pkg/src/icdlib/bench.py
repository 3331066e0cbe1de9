"""Benchmark harness: paired ICD/FCI runs under the oracle or a Fisher-z test.

Results are plain rows; :func:`write_results` stores them as ``runs.csv``
(one row per instance, algorithm and sample size) and ``anytime.csv`` (one
row per ICD iteration). The ``seconds`` column is the only non-deterministic
field.
"""

from __future__ import annotations

import csv
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .citest import CiCache, FisherZ
from .evaluation import structural_errors
from .fci import fci
from .icd import IcdConfig, iter_icd
from .oracle import DSepOracle, true_pag
from .simgen import random_instance, sample_data

RUN_FIELDS = [
    "graph_id", "n_nodes", "instance", "seed", "n_observed", "samples", "algo",
    "ci_total", "ci_by_size", "cache_hits", "extra_edges", "missing_edges", "wrong_marks",
    "seconds",
]
ANYTIME_FIELDS = [
    "graph_id", "n_nodes", "instance", "samples", "algo", "r",
    "ci_total", "edges", "extra_edges", "missing_edges", "wrong_marks",
]
TIMING_FIELDS = ("seconds",)


@dataclass
class ExperimentConfig:
    node_counts: list[int] = field(default_factory=lambda: [15, 20, 25, 35])
    rho: float = 2.0
    graphs_per_size: int = 25
    sample_sizes: list[int] = field(default_factory=lambda: [100, 200, 500, 1000])
    alpha: float = 0.01
    algos: tuple[str, ...] = ("icd", "fci")
    seed: int = 0
    max_cond: int | None = None
    jobs: int = 1

    def __post_init__(self):
        if not self.node_counts or any(n < 2 for n in self.node_counts):
            raise ValueError("node counts must be at least 2")
        if self.graphs_per_size < 1:
            raise ValueError("graphs_per_size must be positive")
        if any(ell < 1 for ell in self.sample_sizes):
            raise ValueError("sample sizes must be positive")
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        bad = set(self.algos) - {"icd", "fci"}
        if bad or not self.algos:
            raise ValueError(f"unknown algorithms {sorted(bad)}")


@dataclass
class RunResult:
    graph_id: str
    n_nodes: int
    instance: int
    seed: int
    n_observed: int
    samples: int
    algo: str
    ci_total: int
    ci_by_size: list[int]
    cache_hits: int
    extra_edges: int
    missing_edges: int
    wrong_marks: int
    seconds: float
    anytime: list[dict] = field(default_factory=list)

    def row(self) -> dict:
        d = asdict(self)
        d.pop("anytime")
        d["ci_by_size"] = ";".join(map(str, self.ci_by_size))
        return d


def instance_seed(base: int, i: int) -> int:
    return base ^ i


def _run_algorithm(algo, n_obs, tester, max_cond, strict):
    """Run one algorithm; returns (final graph, stats, seconds, snapshots)."""
    cache = CiCache(tester)
    snaps = []
    t0 = time.perf_counter()
    if algo == "icd":
        g = None
        cfg = IcdConfig(n_max=None if max_cond is None else min(max_cond, max(n_obs - 2, 0)), strict=strict)
        for r, g, _ in iter_icd(n_obs, cache, cfg):
            snaps.append((r, g, cache.stats.total))
        if g is None:  # pragma: no cover - iter_icd always yields once
            raise RuntimeError("ICD produced no iteration")
    else:
        g = fci(n_obs, cache, max_cond=max_cond, strict=strict)
    return g, cache.stats, time.perf_counter() - t0, snaps


def run_instance(n: int, i: int, cfg: ExperimentConfig, samples: list[int] | None) -> list[RunResult]:
    """All runs for one ground-truth instance (``samples=None`` means oracle)."""
    seed = instance_seed(cfg.seed, i)
    scm = random_instance(n, cfg.rho, seed)
    oracle = DSepOracle(scm.dag)
    n_obs = oracle.n_observed
    truth = true_pag(scm.dag)
    gid = f"n{n}_i{i:04d}"
    out = []
    for ell in samples or [0]:
        if ell:
            data = sample_data(scm, ell, np.random.SeedSequence([seed, ell]))
            tester, strict = FisherZ(data, cfg.alpha), False
        else:
            tester, strict = oracle, True
        for algo in cfg.algos:
            g, stats, secs, snaps = _run_algorithm(algo, n_obs, tester, cfg.max_cond, strict)
            err = structural_errors(g, truth)
            res = RunResult(gid, n, i, seed, n_obs, ell, algo, stats.total, stats.as_list(),
                            stats.cache_hits, err.extra_edges, err.missing_edges, err.wrong_marks,
                            round(secs, 6))
            for r, snap, total in snaps:
                e = structural_errors(snap, truth)
                res.anytime.append(dict(
                    graph_id=gid, n_nodes=n, instance=i, samples=ell, algo=algo, r=r,
                    ci_total=total, edges=snap.num_edges(), extra_edges=e.extra_edges,
                    missing_edges=e.missing_edges, wrong_marks=e.wrong_marks,
                ))
            out.append(res)
    return out


def _run_all(cfg: ExperimentConfig, samples: list[int] | None) -> list[RunResult]:
    tasks = [(n, i) for n in cfg.node_counts for i in range(cfg.graphs_per_size)]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as ex:
            futs = [ex.submit(run_instance, n, i, cfg, samples) for n, i in tasks]
            chunks = [f.result() for f in futs]
    else:
        chunks = [run_instance(n, i, cfg, samples) for n, i in tasks]
    rows = [r for chunk in chunks for r in chunk]
    rows.sort(key=lambda r: (r.n_nodes, r.instance, r.samples, r.algo))
    return rows


def run_oracle_experiment(cfg: ExperimentConfig) -> list[RunResult]:
    """Paired ICD/FCI runs under the perfect d-separation oracle."""
    return _run_all(cfg, None)


def run_data_experiment(cfg: ExperimentConfig) -> list[RunResult]:
    """Paired ICD/FCI runs with the Fisher-z test, for every sample size."""
    if not cfg.sample_sizes:
        raise ValueError("data experiments need at least one sample size")
    return _run_all(cfg, list(cfg.sample_sizes))


def write_results(results: list[RunResult], out_dir, fmt: str = "csv") -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    runs = [r.row() for r in results]
    anytime = [a for r in results for a in r.anytime]
    if fmt == "json":
        paths = [out / "runs.json", out / "anytime.json"]
        for p, rows in zip(paths, (runs, anytime)):
            p.write_text(json.dumps(rows, indent=1) + "\n")
        return paths
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    paths = [out / "runs.csv", out / "anytime.csv"]
    for p, fields, rows in zip(paths, (RUN_FIELDS, ANYTIME_FIELDS), (runs, anytime)):
        with open(p, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=fields, lineterminator="\n")
            w.writeheader()
            w.writerows(rows)
    return paths
