"""Command-line entry point: ``icdlib {gen,discover,bench-oracle,bench-data,report}``.

Exit codes: 0 on success, 1 on a usage error, 2 when the run itself fails.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .bench import ExperimentConfig, run_data_experiment, run_oracle_experiment, write_results
from .citest import CiCache, DataSet, FisherZ, write_audit_log
from .fci import fci
from .graph import CausalDag, GraphError, read_graph, write_graph
from .icd import IcdConfig, iter_icd
from .oracle import DSepOracle
from .report import ReportError, report
from .simgen import random_instance, sample_data


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(t) for t in text.split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _algos(choice: str) -> tuple[str, ...]:
    return ("icd", "fci") if choice == "both" else (choice,)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="icdlib", description="Anytime causal discovery (ICD) and FCI benchmarks.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="generate one random instance and a dataset")
    g.add_argument("--nodes", type=int, default=15)
    g.add_argument("--rho", type=float, default=2.0)
    g.add_argument("--samples", type=int, default=1000)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True, help="output stem; writes <stem>.dag and <stem>.csv")

    d = sub.add_parser("discover", help="learn a PAG from a DAG (oracle) or a CSV dataset")
    src = d.add_mutually_exclusive_group(required=True)
    src.add_argument("--dag", help="ground-truth DAG file; CI tests use d-separation")
    src.add_argument("--data", help="CSV dataset (header row of column ids)")
    d.add_argument("--algo", choices=("icd", "fci"), default="icd")
    d.add_argument("--alpha", type=float, default=0.01)
    d.add_argument("--max-cond", type=int, default=None)
    d.add_argument("--out", help="PAG output file (default: stdout)")
    d.add_argument("--audit", help="write the CI audit log to this CSV")
    d.add_argument("--dump-iters", help="directory for per-iteration iter_<r>.pag files (ICD)")

    for name, data in (("bench-oracle", False), ("bench-data", True)):
        b = sub.add_parser(name, help=f"paired ICD/FCI runs under {'Fisher-z tests' if data else 'the oracle'}")
        b.add_argument("--nodes", type=_int_list, default=[15, 20, 25, 35])
        b.add_argument("--rho", type=float, default=2.0)
        b.add_argument("--graphs", type=int, default=1000 if data else 25)
        if data:
            b.add_argument("--samples", type=_int_list, default=[100, 200, 500, 1000])
            b.add_argument("--alpha", type=float, default=0.01)
        b.add_argument("--algo", choices=("icd", "fci", "both"), default="both")
        b.add_argument("--max-cond", type=int, default=None)
        b.add_argument("--seed", type=int, default=0)
        b.add_argument("--out", required=True, help="results directory")
        b.add_argument("--jobs", type=int, default=1, help="worker processes (use 1 for timing)")
        b.add_argument("--format", choices=("csv", "json"), default="csv")

    r = sub.add_parser("report", help="summary tables and plots from a results directory")
    r.add_argument("results", help="directory holding runs.csv or runs.json")
    r.add_argument("--out", help="output directory (default: <results>/report)")
    r.add_argument("--no-plots", action="store_true")
    return p


def _cmd_gen(a) -> None:
    if a.nodes < 2 or a.samples < 1:
        raise UsageError("--nodes must be >= 2 and --samples >= 1")
    scm = random_instance(a.nodes, a.rho, a.seed)
    data = sample_data(scm, a.samples, np.random.SeedSequence([a.seed, a.samples]))
    stem = Path(a.out)
    stem.parent.mkdir(parents=True, exist_ok=True)
    write_graph(stem.with_suffix(".dag"), scm.dag)
    np.savetxt(stem.with_suffix(".csv"), data.values, delimiter=",", fmt="%.17g",
               header=",".join(map(str, data.columns)), comments="")


def _read_data(path) -> DataSet:
    with open(path) as fh:
        header = fh.readline().strip()
    try:
        cols = [int(t) for t in header.split(",")]
    except ValueError as e:
        raise GraphError(f"{path}: header must list integer column ids") from e
    values = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return DataSet(values, columns=cols)


def _cmd_discover(a) -> None:
    if not 0 < a.alpha < 1:
        raise UsageError("--alpha must lie in (0, 1)")
    if a.dag:
        dag = read_graph(a.dag)
        if not isinstance(dag, CausalDag):
            raise GraphError(f"{a.dag}: expected a 'dag' graph file")
        tester, strict = DSepOracle(dag), True
        n = tester.n_observed
    else:
        data = _read_data(a.data)
        tester, strict = FisherZ(data, a.alpha), False
        n = data.n_vars
    log: list = []
    cache = CiCache(tester, log=log if a.audit else None)
    if a.algo == "icd":
        n_max = None if a.max_cond is None else min(a.max_cond, max(n - 2, 0))
        dump = Path(a.dump_iters) if a.dump_iters else None
        if dump:
            dump.mkdir(parents=True, exist_ok=True)
        g = None
        for r, g, _ in iter_icd(n, cache, IcdConfig(n_max=n_max, strict=strict)):
            if dump:
                write_graph(dump / f"iter_{r}.pag", g)
    else:
        g = fci(n, cache, max_cond=a.max_cond, strict=strict)
    if a.audit:
        write_audit_log(a.audit, log)
    if a.out:
        write_graph(a.out, g)
    else:
        sys.stdout.write(g.to_text())
    print(f"{a.algo}: {cache.stats.total} unique CI tests, by size {cache.stats.as_list()}", file=sys.stderr)


def _cmd_bench(a, data: bool) -> None:
    try:
        cfg = ExperimentConfig(
            node_counts=a.nodes, rho=a.rho, graphs_per_size=a.graphs,
            sample_sizes=a.samples if data else [100],
            alpha=a.alpha if data else 0.01, algos=_algos(a.algo), seed=a.seed,
            max_cond=a.max_cond, jobs=a.jobs,
        )
    except ValueError as e:
        raise UsageError(str(e)) from e
    if a.rho <= 0 or a.jobs < 1:
        raise UsageError("--rho must be positive and --jobs at least 1")
    res = run_data_experiment(cfg) if data else run_oracle_experiment(cfg)
    for p in write_results(res, a.out, a.format):
        print(p)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.cmd == "gen":
            _cmd_gen(args)
        elif args.cmd == "discover":
            _cmd_discover(args)
        elif args.cmd in ("bench-oracle", "bench-data"):
            _cmd_bench(args, args.cmd == "bench-data")
        else:
            for p in report(args.results, args.out, plots=not args.no_plots):
                print(p)
    except UsageError as e:
        print(f"icdlib {args.cmd}: error: {e}", file=sys.stderr)
        return 1
    except (OSError, ValueError, RuntimeError, ReportError) as e:
        print(f"icdlib {args.cmd}: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
