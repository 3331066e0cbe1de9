"""Summaries and plots from a benchmark results directory.

Every number in the output comes from ``runs.csv`` (or ``runs.json``); plots
are derived views of the CSV tables written alongside them.
"""

from __future__ import annotations

import csv
import json
from collections import defaultdict
from pathlib import Path

import numpy as np

from .bench import RUN_FIELDS
from .evaluation import Ecdf, ks_2sample


class ReportError(RuntimeError):
    pass


_INT_FIELDS = ("n_nodes", "instance", "seed", "n_observed", "samples", "ci_total",
               "cache_hits", "extra_edges", "missing_edges", "wrong_marks")


def load_runs(results_dir) -> list[dict]:
    """Parse and validate the run table; raises :class:`ReportError` on any problem."""
    d = Path(results_dir)
    if not d.is_dir():
        raise ReportError(f"{d}: results directory does not exist")
    if (d / "runs.csv").is_file():
        src = d / "runs.csv"
        with open(src, newline="") as fh:
            rows = list(csv.DictReader(fh))
    elif (d / "runs.json").is_file():
        src = d / "runs.json"
        try:
            rows = json.loads(src.read_text())
        except json.JSONDecodeError as e:
            raise ReportError(f"{src}: invalid JSON ({e})") from e
    else:
        raise ReportError(f"{d}: no runs.csv or runs.json found")
    if not rows:
        raise ReportError(f"{src}: no result rows")
    out = []
    for i, row in enumerate(rows, start=2):
        missing = [f for f in RUN_FIELDS if f not in row]
        if missing:
            raise ReportError(f"{src}: row {i} lacks columns {missing}")
        try:
            r = {f: int(row[f]) for f in _INT_FIELDS}
            r["seconds"] = float(row["seconds"])
            sizes = str(row["ci_by_size"])
            r["ci_by_size"] = [int(v) for v in sizes.split(";")] if sizes else []
        except (TypeError, ValueError) as e:
            raise ReportError(f"{src}: row {i} is malformed ({e})") from e
        r["graph_id"] = str(row["graph_id"])
        r["algo"] = str(row["algo"])
        if sum(r["ci_by_size"]) != r["ci_total"]:
            raise ReportError(f"{src}: row {i} per-size counts do not sum to ci_total")
        out.append(r)
    return out


def _groups(runs, keys):
    g = defaultdict(list)
    for r in runs:
        g[tuple(r[k] for k in keys)].append(r)
    return dict(sorted(g.items()))


def _paired(runs):
    """(n_nodes, samples) -> (icd totals, fci totals, icd secs, fci secs) over shared instances."""
    out = {}
    for key, rows in _groups(runs, ("n_nodes", "samples")).items():
        by = {(r["instance"], r["algo"]): r for r in rows}
        inst = sorted({i for i, a in by if (i, "icd") in by and (i, "fci") in by})
        if inst:
            out[key] = tuple(
                np.array([by[i, a][f] for i in inst], dtype=float)
                for f in ("ci_total", "seconds") for a in ("icd", "fci")
            )
    return out


def _fmt(v) -> str:
    if isinstance(v, float):
        return "nan" if np.isnan(v) else f"{v:.6g}"
    return str(v)


def _tables(runs):
    t = {}
    rows = []
    for (n, ell, algo), rs in _groups(runs, ("n_nodes", "samples", "algo")).items():
        tot = np.array([r["ci_total"] for r in rs], dtype=float)
        rows.append([n, ell, algo, len(rs), float(tot.mean()), float(np.median(tot)), int(tot.max())])
    t["ci_totals"] = (["n_nodes", "samples", "algo", "runs", "mean_ci", "median_ci", "max_ci"], rows)

    width = max(len(r["ci_by_size"]) for r in runs)
    hist = sorted(runs, key=lambda r: (r["n_nodes"], r["samples"], r["instance"], r["algo"]))
    t["ci_by_size"] = (
        ["graph_id", "samples", "algo"] + [f"size_{k}" for k in range(width)] + ["total"],
        [[r["graph_id"], r["samples"], r["algo"]] + r["ci_by_size"] + [0] * (width - len(r["ci_by_size"]))
         + [r["ci_total"]] for r in hist],
    )

    rows = []
    for (n, ell, algo), rs in _groups(runs, ("n_nodes", "samples", "algo")).items():
        rows.append([n, ell, algo] + [float(np.mean([r[f] for r in rs]))
                                      for f in ("extra_edges", "missing_edges", "wrong_marks")])
    t["errors"] = (["n_nodes", "samples", "algo", "extra_edges", "missing_edges", "wrong_marks"], rows)

    ratio, quant, ks = [], [], []
    for (n, ell), (ci_i, ci_f, s_i, s_f) in _paired(runs).items():
        ratio.append([n, ell, len(ci_i), float(np.mean(ci_f / np.maximum(ci_i, 1))),
                      float(s_f.sum() / s_i.sum()) if s_i.sum() > 0 else float("nan")])
        qi, qf = Ecdf(ci_i).quantile(0.9), Ecdf(ci_f).quantile(0.9)
        quant.append([n, ell, qi, qf, qf / qi if qi > 0 else float("nan")])
        d, p = ks_2sample(ci_i, ci_f)
        ks.append([n, ell, len(ci_i), d, p])
    t["runtime_ratio"] = (["n_nodes", "samples", "pairs", "mean_ci_ratio_fci_icd", "time_ratio_fci_icd"], ratio)
    t["ecdf_quantiles"] = (["n_nodes", "samples", "icd_q90", "fci_q90", "ratio_fci_icd"], quant)
    t["ks"] = (["n_nodes", "samples", "pairs", "statistic", "p_value"], ks)
    return t


def _plots(runs, out: Path) -> list[Path]:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    paths = []
    groups = _groups(runs, ("n_nodes", "samples"))

    fig, ax = plt.subplots(figsize=(6, 4))
    labels = [f"n={n}" + (f", l={ell}" if ell else "") for n, ell in groups]
    x = np.arange(len(labels))
    for k, algo in enumerate(("icd", "fci")):
        means = [np.mean([r["ci_total"] for r in rs if r["algo"] == algo] or [0]) for rs in groups.values()]
        ax.bar(x + (k - 0.5) * 0.4, means, width=0.4, label=algo.upper())
    ax.set_xticks(x, labels, rotation=30, ha="right")
    ax.set_ylabel("mean unique CI tests")
    ax.legend()
    fig.tight_layout()
    paths.append(out / "ci_totals.svg")
    fig.savefig(paths[-1])
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(6, 4))
    width = max(len(r["ci_by_size"]) for r in runs)
    for k, algo in enumerate(("icd", "fci")):
        h = np.zeros(width)
        for r in runs:
            if r["algo"] == algo:
                h[: len(r["ci_by_size"])] += r["ci_by_size"]
        ax.bar(np.arange(width) + (k - 0.5) * 0.4, h, width=0.4, label=algo.upper())
    ax.set_xlabel("condition-set size")
    ax.set_ylabel("unique CI tests (all runs)")
    ax.legend()
    fig.tight_layout()
    paths.append(out / "ci_by_size.svg")
    fig.savefig(paths[-1])
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(6, 4))
    for (n, ell), rs in groups.items():
        for algo, style in (("icd", "-"), ("fci", "--")):
            e = [r["ci_total"] for r in rs if r["algo"] == algo]
            if e:
                v = np.sort(e)
                ax.step(v, np.arange(1, v.size + 1) / v.size, style, where="post",
                        label=f"{algo.upper()} n={n}" + (f" l={ell}" if ell else ""))
    ax.set_xlabel("unique CI tests")
    ax.set_ylabel("ECDF")
    ax.legend(fontsize="small")
    fig.tight_layout()
    paths.append(out / "ecdf.svg")
    fig.savefig(paths[-1])
    plt.close(fig)
    return paths


def report(results_dir, out_dir=None, plots: bool = True) -> list[Path]:
    """Write summary CSVs (and SVG plots) for the runs in ``results_dir``.

    Input is validated in full before anything is written, so a bad
    directory leaves no partial output.
    """
    runs = load_runs(results_dir)
    tables = _tables(runs)
    out = Path(out_dir) if out_dir is not None else Path(results_dir) / "report"
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, (header, rows) in tables.items():
        p = out / f"{name}.csv"
        with open(p, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows([[_fmt(v) for v in row] for row in rows])
        written.append(p)
    if plots:
        written.extend(_plots(runs, out))
    return written
