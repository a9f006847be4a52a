"""Command-line interface: simulate, learn, oracle, benchmark.

Reports are JSON (schema-versioned), matrices and data are CSV, graphs are
plain edge lists, so every artifact is diff-friendly.  Exit codes: 0 on
success, 2 on input errors, 3 when the solver hit its loop cap without
converging.  Machine output goes to stdout / files; ``--progress`` streams
per-loop objectives to stderr.  The ``DAGCD_WORKERS`` environment variable
bounds the benchmark worker pool.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .cpdag import cpdag_distance, dag_to_cpdag, write_cpdag_csv
from .graph import DirectedGraph, Superstructure, read_edge_list, write_edge_list
from .model_select import LambdaGrid, bic_score, select_lambda
from .oracle import MAX_EXACT_NODES, exhaustive_search
from .simulate import (
    random_dag,
    random_sem,
    read_dataset_csv,
    sample_covariance,
    simulate,
    write_dataset_csv,
    write_sem_json,
)
from .solver import SolverConfig, coordinate_descent
from .superstructure import NsConfig, complete_superstructure, default_rho, neighborhood_selection

REPORT_SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_INPUT_ERROR = 2
EXIT_NOT_CONVERGED = 3


def _seed_int(seq: np.random.SeedSequence) -> int:
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def _write_report(path: Path, report: dict) -> None:
    path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")


def _load_superstructure(source: str, m: int, cov: np.ndarray, n: int,
                         ns_rho: float | None) -> Superstructure:
    if source == "complete":
        return complete_superstructure(m)
    if source == "ns":
        rho = default_rho(m, n) if ns_rho is None else ns_rho
        return neighborhood_selection(cov, NsConfig(rho=rho))
    num_nodes, edges = read_edge_list(source)
    if num_nodes is not None and num_nodes != m:
        raise ValueError(f"{source}: file is on {num_nodes} nodes, data has {m}")
    return Superstructure.from_edges(m, edges)


def _load_truth_cpdag(path: str, m: int) -> np.ndarray:
    num_nodes, edges = read_edge_list(path)
    if num_nodes is not None and num_nodes != m:
        raise ValueError(f"{path}: file is on {num_nodes} nodes, data has {m}")
    return dag_to_cpdag(DirectedGraph(m, edges))


def cmd_simulate(args: argparse.Namespace) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    dag_seed, sem_seed, data_seed = (
        _seed_int(s) for s in np.random.SeedSequence(args.seed).spawn(3)
    )
    g = random_dag(args.m, args.edges, dag_seed)
    params = random_sem(g, sem_seed)
    data = simulate(params, args.n, data_seed)
    write_dataset_csv(out / "data.csv", data)
    write_sem_json(out / "sem.json", params)
    write_edge_list(out / "dag.txt", args.m, g.edges())
    report = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "command": "simulate",
        "config": {"m": args.m, "edges": args.edges, "n": args.n},
        "seed": args.seed,
        "num_edges": g.num_edges(),
        "files": ["data.csv", "sem.json", "dag.txt"],
    }
    _write_report(out / "report.json", report)
    return EXIT_OK


def cmd_learn(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    data = read_dataset_csv(args.data)
    n, m = data.shape
    cov = sample_covariance(data)
    superstructure = _load_superstructure(args.superstructure, m, cov, n, args.ns_rho)
    config = SolverConfig(
        lambda_sq=args.lambda_sq if args.lambda_sq is not None else 0.0,
        spacer_threshold_c=args.spacer_c,
        max_full_loops=args.max_full_loops,
    )

    if args.lambda_sq is not None:
        progress = None
        if args.progress:
            def progress(loop: int, objective: float) -> None:
                print(f"loop {loop}: objective {objective:.12g}", file=sys.stderr)

        lambda_sq = args.lambda_sq
        result = coordinate_descent(cov, superstructure, config, progress=progress)
    else:
        grid_progress = None
        if args.progress:
            def grid_progress(lam: float, loop: int, objective: float) -> None:
                print(f"lambda_sq {lam:.6g} loop {loop}: objective {objective:.12g}",
                      file=sys.stderr)

        grid = LambdaGrid(m, n, tuple(range(1, args.bic_grid_max_c + 1)))
        lambda_sq, result = select_lambda(cov, superstructure, n, grid, config,
                                          progress=grid_progress)

    estimated = DirectedGraph(m, result.support)
    est_cpdag = dag_to_cpdag(estimated)
    report = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "command": "learn",
        "config": {
            "data": args.data,
            "superstructure": args.superstructure,
            "ns_rho": args.ns_rho,
            "lambda_sq_fixed": args.lambda_sq,
            "bic_grid_max_c": args.bic_grid_max_c,
            "spacer_c": args.spacer_c,
        },
        "n": n,
        "m": m,
        "lambda_sq": lambda_sq,
        "objective": result.objective,
        "bic": bic_score(result.factor, cov, n),
        "support_size": len(result.support),
        "full_loops": result.full_loops,
        "spacer_steps": result.spacer_steps,
        "converged": result.converged,
    }
    if args.truth is not None:
        truth_cpdag = _load_truth_cpdag(args.truth, m)
        report["d_cpdag"] = cpdag_distance(est_cpdag, truth_cpdag)
    report["wall_seconds"] = time.perf_counter() - started

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    np.savetxt(out / "factor.csv", result.factor, delimiter=",", fmt="%.17g")
    write_edge_list(out / "edges.txt", m, result.support)
    write_cpdag_csv(out / "cpdag.csv", est_cpdag)
    _write_report(out / "report.json", report)
    return EXIT_OK if result.converged else EXIT_NOT_CONVERGED


def cmd_oracle(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    data = read_dataset_csv(args.data)
    n, m = data.shape
    if m > MAX_EXACT_NODES:
        raise ValueError(
            f"oracle supports at most {MAX_EXACT_NODES} variables, data has {m}"
        )
    cov = sample_covariance(data)
    superstructure = _load_superstructure(args.superstructure, m, cov, n, args.ns_rho)
    result = exhaustive_search(cov, superstructure, args.lambda_sq)
    report = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "command": "oracle",
        "config": {
            "data": args.data,
            "superstructure": args.superstructure,
            "lambda_sq": args.lambda_sq,
        },
        "n": n,
        "m": m,
        "optimal_objective": result.optimal_objective,
        "optimal_support": [list(e) for e in result.optimal_support],
        "num_dags_enumerated": result.num_dags_enumerated,
        "wall_seconds": time.perf_counter() - started,
    }
    print(json.dumps(report, indent=2, sort_keys=True))
    if args.out is not None:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        _write_report(out / "report.json", report)
    return EXIT_OK


def _benchmark_task(task: dict) -> dict:
    """One replication: simulate, fit with BIC selection, evaluate."""
    params = task["params"]
    data = simulate(params, task["n"], task["data_seed"])
    cov = sample_covariance(data)
    m = params.num_nodes
    superstructure = _load_superstructure(
        task["superstructure"], m, cov, task["n"], task["ns_rho"]
    )
    started = time.perf_counter()
    grid = LambdaGrid(m, task["n"], tuple(range(1, task["bic_grid_max_c"] + 1)))
    config = SolverConfig(lambda_sq=0.0, spacer_threshold_c=task["spacer_c"])
    lambda_sq, result = select_lambda(cov, superstructure, task["n"], grid, config)
    seconds = time.perf_counter() - started
    est_cpdag = dag_to_cpdag(DirectedGraph(m, result.support))
    row = {
        "n": task["n"],
        "replication": task["replication"],
        "data_seed": task["data_seed"],
        "lambda_sq": lambda_sq,
        "support_size": len(result.support),
        "objective": result.objective,
        "oracle_objective": None,
        "objective_gap": None,
        "d_cpdag": cpdag_distance(est_cpdag, task["true_cpdag"]),
        "converged": result.converged,
        "wall_seconds": seconds,
    }
    if m <= MAX_EXACT_NODES:
        optimum = exhaustive_search(cov, superstructure, lambda_sq)
        row["oracle_objective"] = optimum.optimal_objective
        row["objective_gap"] = (
            (result.objective - optimum.optimal_objective) / optimum.optimal_objective
        )
    return row


_BENCH_COLUMNS = (
    "n", "replication", "data_seed", "lambda_sq", "support_size", "objective",
    "oracle_objective", "objective_gap", "d_cpdag", "converged", "wall_seconds",
)


def cmd_benchmark(args: argparse.Namespace) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    n_values = list(args.n)
    reps = args.replications

    seqs = np.random.SeedSequence(args.seed).spawn(2 + len(n_values) * reps)
    g = random_dag(args.m, args.edges, _seed_int(seqs[0]))
    params = random_sem(g, _seed_int(seqs[1]))
    true_cpdag = dag_to_cpdag(g)

    tasks = []
    for i, n in enumerate(n_values):
        for r in range(reps):
            tasks.append({
                "params": params,
                "true_cpdag": true_cpdag,
                "n": n,
                "replication": r,
                "data_seed": _seed_int(seqs[2 + i * reps + r]),
                "superstructure": args.superstructure,
                "ns_rho": args.ns_rho,
                "bic_grid_max_c": args.bic_grid_max_c,
                "spacer_c": args.spacer_c,
            })

    workers = int(os.environ.get("DAGCD_WORKERS", "1"))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_benchmark_task, tasks))
    else:
        rows = [_benchmark_task(t) for t in tasks]

    lines = [",".join(_BENCH_COLUMNS)]
    for row in rows:
        lines.append(",".join(
            "" if row[c] is None else repr(row[c]) if isinstance(row[c], float)
            else str(row[c])
            for c in _BENCH_COLUMNS
        ))
    (out / "replications.csv").write_text("\n".join(lines) + "\n")

    per_n = {}
    for n in n_values:
        sub = [row for row in rows if row["n"] == n]
        dists = np.array([row["d_cpdag"] for row in sub], dtype=float)
        secs = np.array([row["wall_seconds"] for row in sub], dtype=float)
        agg = {
            "replications": len(sub),
            "d_cpdag_mean": float(dists.mean()),
            "d_cpdag_std": float(dists.std()),
            "seconds_mean": float(secs.mean()),
            "seconds_std": float(secs.std()),
        }
        gaps = [row["objective_gap"] for row in sub if row["objective_gap"] is not None]
        if gaps:
            agg["objective_gap_mean"] = float(np.mean(gaps))
            agg["objective_gap_median"] = float(np.median(gaps))
        per_n[str(n)] = agg

    report = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "command": "benchmark",
        "config": {
            "m": args.m,
            "edges": args.edges,
            "n": n_values,
            "replications": reps,
            "superstructure": args.superstructure,
            "ns_rho": args.ns_rho,
            "bic_grid_max_c": args.bic_grid_max_c,
            "spacer_c": args.spacer_c,
        },
        "seed": args.seed,
        "true_edges": [list(e) for e in g.edges()],
        "results": per_n,
    }
    _write_report(out / "report.json", report)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dagcd",
        description="Learn linear Gaussian Bayesian networks by penalized "
                    "coordinate descent.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="generate a synthetic dataset")
    p_sim.add_argument("--m", type=int, required=True, help="number of variables")
    p_sim.add_argument("--edges", type=int, required=True, help="number of DAG edges")
    p_sim.add_argument("--n", type=int, required=True, help="number of samples")
    p_sim.add_argument("--seed", type=int, required=True)
    p_sim.add_argument("--out", required=True, help="output directory")
    p_sim.set_defaults(func=cmd_simulate)

    p_learn = sub.add_parser("learn", help="fit a DAG to a dataset")
    p_learn.add_argument("--data", required=True, help="dataset CSV")
    p_learn.add_argument("--superstructure", default="complete",
                         help="'complete', 'ns', or an edge-list file")
    p_learn.add_argument("--ns-rho", type=float, default=None,
                         help="lasso penalty for 'ns' (default sqrt(log m / n))")
    p_learn.add_argument("--lambda-sq", type=float, default=None,
                         help="fixed penalty; omit to select by BIC")
    p_learn.add_argument("--bic-grid-max-c", type=int, default=15)
    p_learn.add_argument("--spacer-c", type=int, default=5)
    p_learn.add_argument("--max-full-loops", type=int, default=10_000)
    p_learn.add_argument("--truth", default=None,
                         help="true-DAG edge list; adds d_cpdag to the report")
    p_learn.add_argument("--out", required=True, help="output directory")
    p_learn.add_argument("--progress", action="store_true",
                         help="stream per-loop objectives to stderr")
    p_learn.set_defaults(func=cmd_learn)

    p_oracle = sub.add_parser("oracle", help="exact optimum by enumeration (m <= 5)")
    p_oracle.add_argument("--data", required=True, help="dataset CSV")
    p_oracle.add_argument("--superstructure", default="complete",
                          help="'complete', 'ns', or an edge-list file")
    p_oracle.add_argument("--ns-rho", type=float, default=None)
    p_oracle.add_argument("--lambda-sq", type=float, required=True)
    p_oracle.add_argument("--out", default=None, help="optional output directory")
    p_oracle.set_defaults(func=cmd_oracle)

    p_bench = sub.add_parser("benchmark",
                             help="replicated simulate/learn/evaluate runs")
    p_bench.add_argument("--m", type=int, required=True)
    p_bench.add_argument("--edges", type=int, required=True)
    p_bench.add_argument("--n", type=int, nargs="+", required=True,
                         help="one or more sample sizes")
    p_bench.add_argument("--replications", type=int, default=10)
    p_bench.add_argument("--seed", type=int, required=True)
    p_bench.add_argument("--superstructure", default="complete",
                         help="'complete', 'ns', or an edge-list file")
    p_bench.add_argument("--ns-rho", type=float, default=None)
    p_bench.add_argument("--bic-grid-max-c", type=int, default=15)
    p_bench.add_argument("--spacer-c", type=int, default=5)
    p_bench.add_argument("--out", required=True, help="output directory")
    p_bench.set_defaults(func=cmd_benchmark)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, IndexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
