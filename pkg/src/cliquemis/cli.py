"""Command line entry point: ``cliquemis {run,suite,verify,gen}``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from cliquemis.algorithm2 import Algo2Config, run_algorithm2
from cliquemis.graph import read_edge_list, write_edge_list
from cliquemis.sim import SimulationError
from cliquemis.suite import SUITES, ExperimentSpec, make_graph, run_suite
from cliquemis.verify import verify_mis


def parse_seeds(text: str) -> list[int]:
    """``"0-19"``, ``"1,5,9"`` or a mix like ``"0-4,10"``."""
    seeds: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            lo, hi = part.split("-", 1)
            seeds.extend(range(int(lo), int(hi) + 1))
        else:
            seeds.append(int(part))
    return seeds


def _csv_list(kind):
    return lambda text: [kind(x) for x in text.split(",") if x.strip()]


def _algo_overrides(args, cfg: Algo2Config) -> Algo2Config:
    changes = {}
    if args.tau is not None:
        changes["tau"] = args.tau
    if args.C is not None:
        changes["C"] = args.C
    if args.cL is not None:
        changes["c_L"] = args.cL
    if getattr(args, "no_fallback", False):
        changes["adaptive_k_fallback"] = False
    return replace(cfg, **changes) if changes else cfg


def _add_algo_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tau", type=float, help="degree threshold for the while-loop (default ln(n)^4)")
    p.add_argument("--C", type=int, help="block-size constant (>= 5)")
    p.add_argument("--cL", type=int, help="round cost of one routing-primitive call")
    p.add_argument("--no-fallback", action="store_true", help="abort instead of shrinking oversized blocks")


def cmd_run(args) -> int:
    if args.input:
        g = read_edge_list(args.input)
    else:
        param = args.p if args.graph == "gnp" else args.d
        g = make_graph(args.graph, args.n, param, args.graph_seed)
    cfg = _algo_overrides(args, Algo2Config(seed=args.seed))
    try:
        res = run_algorithm2(g, cfg)
    except SimulationError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    st = res.stats
    summary = {
        "n": st.n,
        "m": st.m,
        "delta": st.delta,
        "tau": st.tau,
        "while_iterations": st.while_iterations,
        "K_final": st.K_final,
        "final_delta": st.final_delta,
        "fallback_triggers": st.fallback_triggers,
        "rounds_stage1": st.rounds_stage1,
        "rounds_stage2": st.rounds_stage2,
        "rounds_finisher": st.rounds_finisher,
        "logical_rounds": st.logical_rounds,
        "rounds_match": st.rounds_match,
        "mis_size": int(res.mis.sum()),
        "finisher": "luby (substitute; finisher rounds are O(log n), reported separately)",
    }
    print(json.dumps(summary, indent=2))
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        st.write_json(out / "stats.json")
        st.write_iterations_csv(out / "iterations.csv")
        res.engine.write_reports(out / "rounds.jsonl")
        np.savetxt(out / "mis.txt", np.flatnonzero(res.mis), fmt="%d")
    return 0


def cmd_suite(args) -> int:
    spec = ExperimentSpec.from_file(args.config) if args.config else ExperimentSpec()
    changes = {}
    if args.graph:
        changes["family"] = args.graph
    if args.n:
        changes["n"] = args.n
    if args.p:
        changes["p"] = args.p
    if args.d:
        changes["d"] = args.d
    if args.seeds is not None:
        changes["seeds"] = parse_seeds(args.seeds)
    if args.suite:
        changes["suites"] = args.suite
    if args.out:
        changes["out"] = args.out
    if args.workers:
        changes["workers"] = args.workers
    spec = replace(spec, config=_algo_overrides(args, spec.config), **changes)
    report = run_suite(spec)
    print(json.dumps(report.summary(), indent=2))
    for line in report.hard_failures:
        print(f"FAIL {line}", file=sys.stderr)
    return report.exit_code


def read_vertex_set(path: str | Path) -> list[int]:
    text = Path(path).read_text().split()
    return [int(x) for x in text]


def cmd_verify(args) -> int:
    g = read_edge_list(args.graph)
    check = verify_mis(g, read_vertex_set(args.set))
    if check:
        print("OK: maximal independent set")
        return 0
    if check.edge is not None:
        print(f"NOT INDEPENDENT: edge {check.edge[0]} {check.edge[1]}")
    else:
        print(f"NOT MAXIMAL: vertex {check.vertex} can be added")
    return 1


def cmd_gen(args) -> int:
    param = args.p if args.graph == "gnp" else args.d
    g = make_graph(args.graph, args.n, param, args.seed)
    write_edge_list(g, args.out)
    print(f"wrote {g.n} vertices, {g.edge_count} edges to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cliquemis", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="single algorithm run")
    p.add_argument("--input", help="edge-list file instead of a generated graph")
    p.add_argument("--graph", choices=("gnp", "regular"), default="gnp")
    p.add_argument("--n", type=int, default=1024)
    p.add_argument("--p", type=float, default=0.05)
    p.add_argument("--d", type=int, default=32)
    p.add_argument("--graph-seed", type=int, default=0)
    p.add_argument("--seed", type=int, default=0, help="seed of the random order")
    p.add_argument("--out", help="directory for stats.json, iterations.csv, rounds.jsonl, mis.txt")
    _add_algo_flags(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("suite", help="run an experiment matrix")
    p.add_argument("--config", help="JSON experiment spec")
    p.add_argument("--graph", choices=("gnp", "regular"))
    p.add_argument("--n", type=_csv_list(int))
    p.add_argument("--p", type=_csv_list(float))
    p.add_argument("--d", type=_csv_list(int))
    p.add_argument("--seeds", help="e.g. 0-19 or 1,2,3")
    p.add_argument("--suite", action="append", choices=SUITES)
    p.add_argument("--out")
    p.add_argument("--workers", type=int)
    _add_algo_flags(p)
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("verify", help="check that a vertex set is a maximal independent set")
    p.add_argument("graph", help="edge-list file")
    p.add_argument("set", help="file with whitespace-separated vertex ids")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="write a graph fixture as an edge list")
    p.add_argument("--graph", choices=("gnp", "regular"), default="gnp")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, default=0.05)
    p.add_argument("--d", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
