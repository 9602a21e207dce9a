"""O(log log Delta)-round CONGESTED-CLIQUE MIS via block simulation of greedy.

Stage 1 agrees on a uniform random order. Stage 2 repeatedly ships the
uncovered part of the next block of ranks to the first vertex of the order,
which replays greedy on it locally; selections are then disseminated and the
residual max degree is recomputed. Once that degree is at most the threshold
tau(n), the residual graph is handed to the Luby finisher.

Node-local knowledge is kept columnar: anything learned through an
all-to-all broadcast is identical at every node and is stored once.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from cliquemis.graph import Graph, induced_subgraph, max_degree, neighbor_rows
from cliquemis.greedy import VertexOrder, uniform_order
from cliquemis.kernels import residual_degrees
from cliquemis.luby import FinisherResult, SafetyCapExceeded, run_finisher
from cliquemis.sim import CliqueEngine, MessageBatch, RoutingPreconditionViolation, SimulationError, Tag
from cliquemis.verify import verify_mis

ORDER_ROUNDS = 3
DISSEMINATION_ROUNDS = 4


class InvalidOutput(SimulationError):
    """The assembled set failed MIS verification."""


@dataclass
class Algo2Config:
    C: int = 5
    tau: float | None = None  # explicit threshold; None means ln(n) ** tau_exponent
    tau_exponent: float = 4.0
    c_L: int = 2
    seed: int = 0
    adaptive_k_fallback: bool = True
    stall_rule: str = "increment"  # k >= k_prev + 1; "double" uses k >= 2 k_prev when the formula stalls
    max_iterations: int = 1000
    check_residual: bool = False
    check_order: bool = False

    def __post_init__(self):
        if self.C < 5:
            raise ValueError(f"C must be >= 5, got {self.C}")
        if self.tau is not None and self.tau < 1:
            raise ValueError(f"tau must be >= 1, got {self.tau}")
        if self.c_L < 0:
            raise ValueError("c_L must be non-negative")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        if self.stall_rule not in ("increment", "double"):
            raise ValueError(f"unknown stall_rule {self.stall_rule!r}")

    def threshold(self, n: int) -> float:
        if self.tau is not None:
            return float(self.tau)
        return max(1.0, math.log(n) ** self.tau_exponent) if n > 1 else 1.0


@dataclass
class IterationRecord:
    i: int
    delta: int  # residual max degree at the start of the iteration
    k: int
    k_raw: int
    k_prev: int
    h_edges: int
    h_vertices: int
    selected: int
    rounds: int
    fallback_retries: int
    lemma2_bound: float  # 100 C^2 ln^2 n form
    lemma2_bound_stated: float  # 100 C ln^2 n form
    lemma2_ok: bool
    lemma3_ok: bool
    max_block_degree: int
    block_degree_bound: float


@dataclass
class Algo2Stats:
    n: int
    m: int
    delta: int
    tau: float
    C: int
    c_L: int
    seed: int
    iterations: list[IterationRecord] = field(default_factory=list)
    while_iterations: int = 0
    rounds_stage1: int = 0
    rounds_stage2: int = 0
    rounds_finisher: int = 0
    K_final: int = 0
    fallback_triggers: int = 0
    final_delta: int = 0
    luby_rounds: int = 0
    finisher_pre_joined: int = 0
    finisher_active_curve: list[int] = field(default_factory=list)
    logical_rounds: int = 0
    closed_form_rounds: int = 0
    engine_rounds: int = 0
    primitive_invocations: int = 0
    max_pair_load: int = 0
    finisher: str = "luby"

    @property
    def rounds_match(self) -> bool:
        return self.logical_rounds == self.closed_form_rounds

    @property
    def deltas(self) -> list[int]:
        return [rec.delta for rec in self.iterations] + [self.final_delta]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["rounds_match"] = self.rounds_match
        return d

    def write_json(self, path: str | Path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2)

    def write_iterations_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["i", "delta", "k", "h_edges", "rounds", "lemma2_bound", "lemma3_ok"])
            for rec in self.iterations:
                w.writerow([rec.i, rec.delta, rec.k, rec.h_edges, rec.rounds, f"{rec.lemma2_bound:.6g}", int(rec.lemma3_ok)])


@dataclass
class Algo2Result:
    mis: np.ndarray
    stage2: np.ndarray  # union of block selections
    finisher_mis: np.ndarray
    order: VertexOrder
    stats: Algo2Stats
    engine: CliqueEngine


def agree_on_order(engine: CliqueEngine, seed: int) -> tuple[VertexOrder, int]:
    """Order agreement: ID exchange, leader unicasts positions, positions broadcast."""
    n = engine.n
    start = engine.clock.logical_rounds
    ids = engine.broadcast_all(np.arange(n), label="order:ids")
    leader = int(ids.values.min())

    order = uniform_order(n, seed)
    others = np.flatnonzero(np.arange(n) != leader)
    got, _ = engine.exchange(
        MessageBatch.build(np.full(others.size, leader), others, Tag.POSITION, order.position[others]),
        label="order:positions",
    )
    own = np.empty(n, dtype=np.int64)
    own[leader] = order.position[leader]
    own[got.dst] = got.words[:, 0]
    table = engine.broadcast_all(own, label="order:broadcast")
    return VertexOrder.from_perm(np.argsort(table.values, kind="stable")), engine.clock.logical_rounds - start


def compute_k(n: int, delta_prime: int, C: int) -> int:
    if delta_prime < 1:
        raise ValueError("delta_prime must be >= 1")
    # integer form of floor(n / (sqrt(delta') * C)), exact for any size
    k = math.isqrt(n * n // (C * C * delta_prime))
    return min(max(k, 1), n)


def block_messages(g: Graph, order: VertexOrder, uncovered: np.ndarray, k_prev: int, k: int) -> MessageBatch:
    """Edge messages of the block: each uncovered vertex of rank in ``(k_prev, k]``
    sends every edge to an uncovered lower-ranked neighbour, addressed to ``v_1``."""
    pos = order.position
    v1 = int(order.perm[0])
    block = order.perm[k_prev:k]
    block = block[uncovered[block]]
    src = np.repeat(block, g.degrees[block])
    nbr = neighbor_rows(g, block)
    keep = uncovered[nbr] & (pos[nbr] < pos[src])
    src, nbr = src[keep], nbr[keep]
    return MessageBatch.build(src, np.full(src.size, v1), Tag.EDGE, np.column_stack([src, nbr]))


def collect_block(
    engine: CliqueEngine, g: Graph, order: VertexOrder, uncovered: np.ndarray, k_prev: int, k: int
) -> tuple[np.ndarray, np.ndarray, int]:
    """Route the block's edges to ``v_1``.

    Returns ``(block_vertices, edges, rounds)`` where ``block_vertices`` are the
    uncovered vertices of ranks ``(k_prev, k]`` in rank order (known at ``v_1``
    from the broadcast flags) and ``edges`` is the ``(h, 2)`` array received.
    """
    start = engine.clock.logical_rounds
    batch = block_messages(g, order, uncovered, k_prev, k)
    got = engine.lenzen_route(batch, int(order.perm[0]), label=f"collect:{k_prev}-{k}")
    block = order.perm[k_prev:k]
    return block[uncovered[block]], got.words[:, :2].copy(), engine.clock.logical_rounds - start


def simulate_block(block_vertices: np.ndarray, edges: np.ndarray) -> np.ndarray:
    """Continue greedy over the block at ``v_1``; no communication.

    ``block_vertices`` must be in rank order and ``edges`` rows are
    ``(higher-ranked, lower-ranked)`` pairs, as produced by ``collect_block``.
    """
    lower: dict[int, list[int]] = {}
    for a, b in edges.tolist():
        lower.setdefault(a, []).append(b)
    picked: set[int] = set()
    out = []
    for v in block_vertices.tolist():
        if not any(w in picked for w in lower.get(v, ())):
            picked.add(v)
            out.append(v)
    return np.asarray(out, dtype=np.int64)


def disseminate_and_update(
    engine: CliqueEngine, g: Graph, v1: int, selected: np.ndarray, uncovered: np.ndarray
) -> tuple[np.ndarray, np.ndarray, int]:
    """Notify the selection, cover neighbours, rebroadcast flags and degrees.

    Returns ``(uncovered, residual_degree, rounds)``; every node learns both
    vectors through the two final broadcasts.
    """
    n = g.n
    start = engine.clock.logical_rounds
    selected = np.asarray(selected, dtype=np.int64)

    notify = selected[selected != v1]
    got, _ = engine.exchange(MessageBatch.build(np.full(notify.size, v1), notify, Tag.SELECTED), label="notify:selected")
    knows_selected = np.zeros(n, dtype=bool)
    knows_selected[got.dst] = True
    if selected.size and np.any(selected == v1):
        knows_selected[v1] = True

    sel = np.flatnonzero(knows_selected)
    got, _ = engine.exchange(
        MessageBatch.build(np.repeat(sel, g.degrees[sel]), neighbor_rows(g, sel), Tag.COVER), label="notify:cover"
    )
    flags = uncovered.copy()
    flags[sel] = False
    flags[got.dst] = False

    flags = engine.broadcast_all(flags.astype(np.int64), label="flags").values.astype(bool)
    deg = residual_degrees(g.indptr, g.indices, flags)
    deg = engine.broadcast_all(deg, label="degrees").values
    return flags, deg, engine.clock.logical_rounds - start


def run_algorithm2(g: Graph, cfg: Algo2Config | None = None) -> Algo2Result:
    cfg = cfg or Algo2Config()
    n = g.n
    if n < 1:
        raise ValueError("graph must have at least one vertex")
    engine = CliqueEngine(n, c_L=cfg.c_L, check_order=cfg.check_order)
    tau = cfg.threshold(n)
    ln_n = math.log(n) if n > 1 else 0.0

    order, r1 = agree_on_order(engine, cfg.seed)
    v1 = int(order.perm[0])

    uncovered = np.ones(n, dtype=bool)
    deg = engine.broadcast_all(g.degrees.copy(), label="degrees:initial").values
    delta = int(deg.max())
    stats = Algo2Stats(n=n, m=g.edge_count, delta=delta, tau=tau, C=cfg.C, c_L=cfg.c_L, seed=cfg.seed)
    stats.rounds_stage1 = r1
    stage2_start = engine.clock.logical_rounds - 1

    stage2 = np.zeros(n, dtype=bool)
    k_prev = 0
    cur = delta
    i = 0
    while cur > tau:
        i += 1
        if i > cfg.max_iterations:
            raise SafetyCapExceeded(f"while-loop exceeded {cfg.max_iterations} iterations (delta' = {cur})")
        iter_start = engine.clock.logical_rounds
        k_raw = compute_k(n, cur, cfg.C)
        floor = 2 * k_prev if cfg.stall_rule == "double" and k_raw <= k_prev else k_prev + 1
        k = min(max(k_raw, floor, k_prev + 1), n)
        retries = 0
        while True:
            try:
                block, edges, _ = collect_block(engine, g, order, uncovered, k_prev, k)
                break
            except RoutingPreconditionViolation as exc:
                if not cfg.adaptive_k_fallback:
                    raise RoutingPreconditionViolation(exc.total, exc.n, f"iteration {i}, ranks ({k_prev}, {k}]") from exc
                retries += 1
                k = k_prev + max(1, (k - k_prev) // 2)

        # intermediate per-vertex block-degree claim, recorded only
        in_block = np.zeros(n, dtype=bool)
        in_block[order.perm[k_prev:k]] = True
        blk = np.flatnonzero(in_block & uncovered)
        hits = neighbor_rows(g, blk)
        hits = hits[uncovered[hits]]
        max_block_degree = int(np.bincount(hits, minlength=n).max()) if hits.size else 0

        picked = simulate_block(block, edges)
        stage2[picked] = True
        uncovered, deg, _ = disseminate_and_update(engine, g, v1, picked, uncovered)
        if cfg.check_residual:
            truth, _ = induced_subgraph(g, uncovered)
            if int(deg.max()) != max_degree(truth):
                raise SimulationError(f"residual degree mismatch in iteration {i}")

        bound = delta ** (1.0 / 2 ** (i - 1)) * 100 * cfg.C**2 * ln_n**2
        stats.iterations.append(
            IterationRecord(
                i=i,
                delta=cur,
                k=k,
                k_raw=k_raw,
                k_prev=k_prev,
                h_edges=int(edges.shape[0]),
                h_vertices=int(block.size),
                selected=int(picked.size),
                rounds=engine.clock.logical_rounds - iter_start,
                fallback_retries=retries,
                lemma2_bound=bound,
                lemma2_bound_stated=delta ** (1.0 / 2 ** (i - 1)) * 100 * cfg.C * ln_n**2,
                lemma2_ok=cur <= bound,
                lemma3_ok=retries == 0 and edges.shape[0] <= n,
                max_block_degree=max_block_degree,
                block_degree_bound=n / k,
            )
        )
        stats.fallback_triggers += retries
        k_prev = k
        cur = int(deg.max())

    stats.while_iterations = i
    stats.K_final = k_prev
    stats.final_delta = cur
    stats.rounds_stage2 = engine.clock.logical_rounds - stage2_start

    fin: FinisherResult = run_finisher(
        g, cfg.seed, residual=uncovered, residual_degree=np.where(uncovered, deg, 0), engine=engine
    )
    stats.rounds_finisher = fin.rounds
    stats.luby_rounds = fin.luby_rounds
    stats.finisher_pre_joined = fin.pre_joined
    stats.finisher_active_curve = fin.active_curve

    mis = stage2 | fin.mis
    check = verify_mis(g, mis)
    if not check:
        raise InvalidOutput(f"output is not a maximal independent set: {check}")

    clock = engine.clock
    stats.logical_rounds = clock.logical_rounds
    stats.engine_rounds = clock.engine_rounds
    stats.primitive_invocations = clock.primitive_invocations
    stats.closed_form_rounds = (
        ORDER_ROUNDS + 1 + i * (cfg.c_L + DISSEMINATION_ROUNDS) + stats.fallback_triggers * cfg.c_L + fin.rounds
    )
    stats.max_pair_load = max((rep.max_pair_load for rep in engine.reports), default=0)
    return Algo2Result(mis=mis, stage2=stage2, finisher_mis=fin.mis, order=order, stats=stats, engine=engine)
