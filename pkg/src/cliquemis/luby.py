"""Luby's randomized MIS, run inside the clique engine as the low-degree finisher.

Each phase takes two engine rounds: active vertices send their priority to
their residual neighbours, then strict local minima join and announce it.
Only vertices that are active send in the first round, so a receiver compares
itself against exactly its active neighbours without any extra status round.

Priorities are two words drawn from a counter-based hash of
``(seed, vertex, phase, word)``, so every vertex has its own independent stream
and results do not depend on the order nodes are stepped in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from cliquemis.graph import Graph, neighbor_rows
from cliquemis.sim import CliqueEngine, MessageBatch, SimulationError, Tag

INACTIVE = 0
ACTIVE = 1
IN_MIS = 2
COVERED = 3

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)


class SafetyCapExceeded(SimulationError):
    pass


def _splitmix64(x: np.ndarray) -> np.ndarray:
    z = x + _GOLDEN
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def priority_words(seed: int, vertices: np.ndarray, phase: int, n: int) -> np.ndarray:
    """``(len(vertices), 2)`` array of priority words, each uniform in ``[0, n**2)``."""
    with np.errstate(over="ignore"):
        base = _splitmix64(np.array([seed & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64))
        base = _splitmix64(base ^ np.uint64(phase & 0xFFFFFFFFFFFFFFFF))
        v = np.asarray(vertices, dtype=np.uint64)
        h0 = _splitmix64(_splitmix64(base ^ v) ^ np.uint64(0))
        h1 = _splitmix64(_splitmix64(base ^ v) ^ np.uint64(1))
    limit = np.uint64(max(n * n, 1))
    return np.column_stack([h0 % limit, h1 % limit]).astype(np.int64)


def luby_cap(n: int) -> int:
    return max(1, math.ceil(64 * math.log2(n))) if n > 1 else 1


@dataclass
class FinisherResult:
    mis: np.ndarray
    luby_rounds: int
    rounds: int
    active_curve: list[int] = field(default_factory=list)
    pre_joined: int = 0


def luby_round(
    engine: CliqueEngine,
    g: Graph,
    residual: np.ndarray,
    status: np.ndarray,
    seed: int,
    phase: int,
) -> np.ndarray:
    """One Luby phase (two engine rounds). Returns the updated status array."""
    n = g.n
    active = np.flatnonzero(status == ACTIVE)
    prio = np.zeros((n, 2), dtype=np.int64)
    prio[active] = priority_words(seed, active, phase, n)

    # round 1: active vertices send their priority to every residual neighbour
    src = np.repeat(active, g.degrees[active])
    dst = neighbor_rows(g, active)
    keep = residual[dst]
    src, dst = src[keep], dst[keep]
    got, _ = engine.exchange(MessageBatch.build(src, dst, Tag.PRIORITY, prio[src]), label="luby:priority")

    # receivers with a smaller-keyed sender are not local minima (ties -> smaller id)
    s, d, w = got.src, got.dst, got.words
    mine = prio[d]
    smaller = (w[:, 0] < mine[:, 0]) | ((w[:, 0] == mine[:, 0]) & ((w[:, 1] < mine[:, 1]) | ((w[:, 1] == mine[:, 1]) & (s < d))))
    beaten = np.zeros(n, dtype=bool)
    beaten[d[smaller]] = True
    joins = np.flatnonzero((status == ACTIVE) & ~beaten)

    # round 2: joiners announce to residual neighbours
    src = np.repeat(joins, g.degrees[joins])
    dst = neighbor_rows(g, joins)
    keep = residual[dst]
    got, _ = engine.exchange(MessageBatch.build(src[keep], dst[keep], Tag.JOIN), label="luby:join")

    status = status.copy()
    status[joins] = IN_MIS
    hit = got.dst[status[got.dst] == ACTIVE]
    status[hit] = COVERED
    return status


def run_finisher(
    g: Graph,
    seed: int,
    *,
    residual: np.ndarray | None = None,
    residual_degree: np.ndarray | None = None,
    engine: CliqueEngine | None = None,
    c_L: int = 2,
) -> FinisherResult:
    """MIS of ``g[residual]`` by Luby phases inside ``engine``.

    Vertices whose residual degree is already zero (known locally from the
    last degree broadcast) join immediately without communication.
    """
    n = g.n
    engine = engine or CliqueEngine(max(n, 1), c_L=c_L)
    residual = np.ones(n, dtype=bool) if residual is None else np.asarray(residual, dtype=bool)
    if residual_degree is None:
        from cliquemis.kernels import residual_degrees

        residual_degree = residual_degrees(g.indptr, g.indices, residual)

    status = np.where(residual, ACTIVE, INACTIVE).astype(np.int8)
    isolated = residual & (residual_degree == 0)
    status[isolated] = IN_MIS
    start = engine.clock.logical_rounds

    cap = luby_cap(n)
    curve = []
    phases = 0
    while True:
        remaining = int(np.count_nonzero(status == ACTIVE))
        curve.append(remaining)
        if not remaining:
            break
        if phases >= cap:
            raise SafetyCapExceeded(f"Luby finisher exceeded {cap} phases with {remaining} active vertices")
        status = luby_round(engine, g, residual, status, seed, phases)
        phases += 1

    return FinisherResult(
        mis=status == IN_MIS,
        luby_rounds=phases,
        rounds=engine.clock.logical_rounds - start,
        active_curve=curve,
        pre_joined=int(isolated.sum()),
    )
