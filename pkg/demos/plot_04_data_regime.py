"""
Learning from samples
=====================

With finite data the oracle is replaced by a Fisher-z partial-correlation
test. Errors now appear; we count them per algorithm and compare how many
tests each needed, using the benchmark harness directly.
"""

import numpy as np

from icdlib.bench import ExperimentConfig, run_data_experiment
from icdlib.evaluation import Ecdf, ks_2sample

cfg = ExperimentConfig(node_counts=[15], graphs_per_size=20, sample_sizes=[200, 1000], seed=1)
results = run_data_experiment(cfg)

for ell in cfg.sample_sizes:
    rows = {a: [r for r in results if r.algo == a and r.samples == ell] for a in ("icd", "fci")}
    for algo, rs in rows.items():
        print(f"l={ell:4d} {algo}: missing={np.mean([r.missing_edges for r in rs]):.2f} "
              f"extra={np.mean([r.extra_edges for r in rs]):.2f} "
              f"marks={np.mean([r.wrong_marks for r in rs]):.2f}")

    ###########################################################################
    # The 90th percentile of the CI-count distribution summarises its tail.

    ci_i = [r.ci_total for r in rows["icd"]]
    ci_f = [r.ci_total for r in rows["fci"]]
    q_i, q_f = Ecdf(ci_i).quantile(0.9), Ecdf(ci_f).quantile(0.9)
    d, p = ks_2sample(ci_i, ci_f)
    print(f"l={ell:4d}: 90th pct ICD {q_i:.0f}, FCI {q_f:.0f}; KS D={d:.2f} p={p:.2g}")
