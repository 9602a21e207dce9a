"""Experiment suites: run matrices of seeded instances and collect bound checks."""

from __future__ import annotations

import csv
import hashlib
import json
import platform
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from itertools import product
from pathlib import Path
from typing import Any

import numpy as np

from cliquemis.algorithm2 import Algo2Config, InvalidOutput, run_algorithm2
from cliquemis.graph import Graph, gnp_random, random_regular
from cliquemis.greedy import check_residual_sparsity, greedy_mis, uniform_order
from cliquemis.kernels import BACKEND
from cliquemis.sim import SimulationError
from cliquemis.verify import verify_mis

SUITES = ("lemma1", "lemma2", "lemma3", "rounds", "equivalence")
FAMILIES = ("gnp", "regular")


@dataclass
class ExperimentSpec:
    family: str = "gnp"
    n: list[int] = field(default_factory=lambda: [1024])
    p: list[float] = field(default_factory=lambda: [0.05])
    d: list[int] = field(default_factory=lambda: [32])
    seeds: list[int] = field(default_factory=lambda: list(range(20)))
    order_seed_offset: int = 1_000_003
    config: Algo2Config = field(default_factory=lambda: Algo2Config(tau=64))
    suites: list[str] = field(default_factory=lambda: list(SUITES))
    out: str | None = None
    workers: int = 1

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown graph family {self.family!r}; expected one of {FAMILIES}")
        unknown = set(self.suites) - set(SUITES)
        if unknown:
            raise ValueError(f"unknown suites {sorted(unknown)}; expected a subset of {SUITES}")
        if isinstance(self.config, dict):
            self.config = Algo2Config(**self.config)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ExperimentSpec":
        known = {f.name for f in fields(cls)}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown experiment keys: {sorted(extra)}")
        data = dict(data)
        for key in ("n", "p", "d", "seeds", "suites"):
            if key in data and not isinstance(data[key], list):
                data[key] = [data[key]]
        return cls(**data)

    @classmethod
    def from_file(cls, path: str | Path) -> "ExperimentSpec":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    def config_hash(self) -> str:
        payload = self.to_dict()
        payload.pop("out", None)
        payload.pop("workers", None)
        return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()[:16]

    def instances(self) -> list[dict[str, Any]]:
        params = self.p if self.family == "gnp" else self.d
        return [
            {"family": self.family, "n": n, "param": q, "seed": s}
            for n, q, s in product(self.n, params, self.seeds)
        ]


def make_graph(family: str, n: int, param: float, seed: int) -> Graph:
    if family == "gnp":
        return gnp_random(n, float(param), seed)
    if family == "regular":
        return random_regular(n, int(param), seed)
    raise ValueError(f"unknown graph family {family!r}")


@dataclass
class RunRecord:
    family: str
    n: int
    param: float
    graph_seed: int
    order_seed: int
    m: int = 0
    delta: int = 0
    error: str | None = None
    mis_ok: bool = False
    mis_witness: str | None = None
    mis_size: int = 0
    equivalence_mismatches: int | None = None
    lemma1_violations: int | None = None
    lemma1_first: list[list[float]] = field(default_factory=list)
    lemma2_violations: int = 0
    lemma2_max_ratio: float = 0.0
    progress_ok: bool = True
    fallback_triggers: int = 0
    lemma3_edges_max: int = 0
    while_iterations: int = 0
    rounds_ok: bool = False
    max_pair_load: int = 0
    luby_rounds: int = 0
    rounds_finisher: int = 0
    final_delta: int = 0
    logical_rounds: int = 0
    stats: dict[str, Any] | None = None

    @property
    def hard_failures(self) -> list[str]:
        out = []
        if self.error:
            out.append(f"aborted: {self.error}")
        else:
            if not self.mis_ok:
                out.append(f"invalid MIS ({self.mis_witness})")
            if self.max_pair_load > 1:
                out.append(f"congestion audit: max pair load {self.max_pair_load}")
            if self.equivalence_mismatches:
                out.append(f"{self.equivalence_mismatches} oracle mismatches")
        return out

    @property
    def label(self) -> str:
        return f"{self.family}(n={self.n}, {'p' if self.family == 'gnp' else 'd'}={self.param}) seed={self.graph_seed}"


def run_instance(inst: dict[str, Any], config: Algo2Config, suites: list[str], order_seed_offset: int) -> RunRecord:
    """One seeded instance: build the graph, run the algorithm, apply the requested checks."""
    seed = int(inst["seed"])
    order_seed = seed + order_seed_offset
    rec = RunRecord(inst["family"], int(inst["n"]), inst["param"], seed, order_seed)
    g = make_graph(inst["family"], rec.n, inst["param"], seed)
    rec.m = g.edge_count
    rec.delta = int(g.degrees.max()) if g.n else 0

    try:
        res = run_algorithm2(g, replace(config, seed=order_seed))
    except InvalidOutput as exc:
        rec.mis_witness = str(exc)
        return rec
    except SimulationError as exc:
        rec.error = f"{type(exc).__name__}: {exc}"
        return rec
    except Exception as exc:
        raise RuntimeError(f"{rec.label}: {exc}") from exc
    st = res.stats

    check = verify_mis(g, res.mis)
    rec.mis_ok = check.ok
    rec.mis_witness = None if check.ok else str(check)
    rec.mis_size = int(res.mis.sum())
    rec.while_iterations = st.while_iterations
    rec.fallback_triggers = st.fallback_triggers
    rec.lemma3_edges_max = max((it.h_edges for it in st.iterations), default=0)
    rec.rounds_ok = st.rounds_match
    rec.max_pair_load = st.max_pair_load
    rec.luby_rounds = st.luby_rounds
    rec.rounds_finisher = st.rounds_finisher
    rec.final_delta = st.final_delta
    rec.logical_rounds = st.logical_rounds
    rec.lemma2_violations = sum(not it.lemma2_ok for it in st.iterations)
    rec.lemma2_max_ratio = max((it.delta / it.lemma2_bound for it in st.iterations), default=0.0)
    ds = st.deltas
    rec.progress_ok = all(b < a for a, b in zip(ds, ds[1:]))
    rec.stats = st.to_dict()

    if "equivalence" in suites or "lemma1" in suites:
        trace = greedy_mis(g, uniform_order(g.n, order_seed))
        if "equivalence" in suites:
            rec.equivalence_mismatches = int(np.count_nonzero(trace.chosen_up_to(st.K_final) != res.stage2))
        if "lemma1" in suites:
            viol = check_residual_sparsity(trace, g.n)
            rec.lemma1_violations = len(viol)
            rec.lemma1_first = [[v.t, v.degree, v.bound] for v in viol[:5]]
    return rec


def _run_packed(args):
    return run_instance(*args)


@dataclass
class Report:
    spec: dict[str, Any]
    fingerprint: dict[str, Any]
    runs: list[RunRecord]

    @property
    def hard_failures(self) -> list[str]:
        return [f"{r.label}: {msg}" for r in self.runs for msg in r.hard_failures]

    @property
    def exit_code(self) -> int:
        return 1 if self.hard_failures else 0

    def summary(self) -> dict[str, Any]:
        ok = [r for r in self.runs if not r.error]
        return {
            "runs": len(self.runs),
            "aborted": len(self.runs) - len(ok),
            "hard_failures": len(self.hard_failures),
            "invalid_mis": sum(not r.mis_ok for r in ok),
            "equivalence_mismatches": sum(r.equivalence_mismatches or 0 for r in ok),
            "lemma1_violations": sum(r.lemma1_violations or 0 for r in ok),
            "lemma2_violations": sum(r.lemma2_violations for r in ok),
            "progress_failures": sum(not r.progress_ok for r in ok),
            "fallback_triggers": sum(r.fallback_triggers for r in ok),
            "rounds_mismatches": sum(not r.rounds_ok for r in ok),
            "max_pair_load": max((r.max_pair_load for r in ok), default=0),
            "max_while_iterations": max((r.while_iterations for r in ok), default=0),
            "max_luby_rounds": max((r.luby_rounds for r in ok), default=0),
        }

    def to_dict(self) -> dict[str, Any]:
        return {
            "spec": self.spec,
            "fingerprint": self.fingerprint,
            "summary": self.summary(),
            "hard_failures": self.hard_failures,
            "runs": [asdict(r) for r in self.runs],
        }

    def write(self, out: str | Path) -> None:
        out = Path(out)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "report.json", "w") as fh:
            json.dump(self.to_dict(), fh, indent=2)

        cols = [f.name for f in fields(RunRecord) if f.name not in ("stats", "lemma1_first")]
        with open(out / "runs.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(cols)
            for r in self.runs:
                w.writerow([getattr(r, c) for c in cols])

        with open(out / "iterations.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["family", "n", "param", "seed", "i", "delta", "k", "h_edges", "rounds",
                        "lemma2_bound", "lemma3_ok", "fallback_retries", "max_block_degree"])
            for r in self.runs:
                for it in (r.stats or {}).get("iterations", []):
                    w.writerow([r.family, r.n, r.param, r.graph_seed, it["i"], it["delta"], it["k"], it["h_edges"],
                                it["rounds"], f"{it['lemma2_bound']:.6g}", int(it["lemma3_ok"]),
                                it["fallback_retries"], it["max_block_degree"]])

        with open(out / "finisher_curve.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["family", "n", "param", "seed", "luby_round", "active"])
            for r in self.runs:
                for phase, active in enumerate((r.stats or {}).get("finisher_active_curve", [])):
                    w.writerow([r.family, r.n, r.param, r.graph_seed, phase, active])


def fingerprint(spec: ExperimentSpec) -> dict[str, Any]:
    from cliquemis import __version__

    return {
        "version": __version__,
        "backend": BACKEND,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "config_hash": spec.config_hash(),
    }


def run_suite(spec: ExperimentSpec) -> Report:
    jobs = [(inst, spec.config, list(spec.suites), spec.order_seed_offset) for inst in spec.instances()]
    if spec.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            runs = list(pool.map(_run_packed, jobs))
    else:
        runs = [_run_packed(job) for job in jobs]
    report = Report(spec=spec.to_dict(), fingerprint=fingerprint(spec), runs=runs)
    if spec.out:
        report.write(spec.out)
    return report
