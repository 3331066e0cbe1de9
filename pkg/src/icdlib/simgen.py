"""Random ground-truth DAGs, latent selection and linear-Gaussian sampling.

All randomness comes from :func:`numpy.random.default_rng` (PCG64) seeded
explicitly, so instances replicate across platforms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .citest import DataSet
from .graph import CausalDag


@dataclass(frozen=True)
class GenConfig:
    n: int
    rho: float = 2.0
    seed: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.rho <= 0:
            raise ValueError("rho must be positive")


@dataclass(frozen=True)
class LinearGaussianScm:
    """Linear SEM ``X_i = sum_j W[j, i] X_j + eps_i`` with standard normal noise."""

    dag: CausalDag
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (self.dag.n, self.dag.n):
            raise ValueError("weight matrix must be n x n")
        edges = np.zeros_like(w, dtype=bool)
        for a, b in self.dag.edges():
            edges[a, b] = True
        if np.any((w != 0) != edges):
            raise ValueError("weights must be non-zero exactly on DAG edges")


def _weakly_connected(adj: np.ndarray) -> bool:
    n = adj.shape[0]
    und = adj | adj.T
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for u in np.flatnonzero(und[v]):
            if u not in seen:
                seen.add(int(u))
                stack.append(int(u))
    return len(seen) == n


def random_dag(cfg: GenConfig) -> CausalDag:
    """Upper-triangular Bernoulli(rho / (n - 1)) DAG, resampled until weakly connected.

    Node order ``0 .. n-1`` is a topological order. All nodes are observed.
    """
    rng = np.random.default_rng(cfg.seed)
    p = min(1.0, cfg.rho / (cfg.n - 1))
    upper = np.triu(np.ones((cfg.n, cfg.n), dtype=bool), k=1)
    while True:
        adj = (rng.random((cfg.n, cfg.n)) < p) & upper
        if _weakly_connected(adj):
            break
    edges = [(int(a), int(b)) for a, b in zip(*np.nonzero(adj))]
    return CausalDag.from_edges(cfg.n, edges)


def select_latents(dag: CausalDag, seed) -> CausalDag:
    """Hide ``floor(|P| / 2)`` nodes drawn uniformly from the parentless nodes with two or more children."""
    rng = np.random.default_rng(seed)
    children = dag.children
    pool = [v for v in range(dag.n) if not dag.parents[v] and len(children[v]) >= 2]
    k = len(pool) // 2
    chosen = rng.choice(pool, size=k, replace=False) if k else []
    return dag.with_hidden(latent=[int(v) for v in chosen])


def random_weights(dag: CausalDag, seed) -> np.ndarray:
    """Edge weights drawn from Uniform([-2, -0.5] U [0.5, 2])."""
    rng = np.random.default_rng(seed)
    w = np.zeros((dag.n, dag.n))
    for a, b in dag.edges():
        w[a, b] = rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 2.0)
    return w


def sample_data(scm: LinearGaussianScm, ell: int, seed) -> DataSet:
    """Draw ``ell`` samples in topological order; latent and selection columns are dropped."""
    if ell < 1:
        raise ValueError("ell must be at least 1")
    rng = np.random.default_rng(seed)
    dag = scm.dag
    x = np.zeros((ell, dag.n))
    noise = rng.standard_normal((ell, dag.n))
    for v in dag.topological_order():
        x[:, v] = noise[:, v]
        for p in sorted(dag.parents[v]):
            x[:, v] += scm.weights[p, v] * x[:, p]
    obs = dag.observed
    return DataSet(x[:, obs], columns=obs)


def random_instance(n: int, rho: float, seed: int) -> LinearGaussianScm:
    """DAG, latents and weights for one benchmark instance, from a single seed."""
    s_dag, s_lat, s_w = np.random.SeedSequence(seed).spawn(3)
    dag = random_dag(GenConfig(n, rho, int(s_dag.generate_state(1)[0])))
    dag = select_latents(dag, s_lat)
    return LinearGaussianScm(dag, random_weights(dag, s_w))
