"""Sequential random-order greedy MIS with full residual traces."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from cliquemis.graph import Graph
from cliquemis.kernels import greedy_trace


@dataclass(frozen=True)
class VertexOrder:
    """A processing order. ``perm[r]`` is the vertex at 0-based rank ``r``;
    ``position`` is the inverse permutation."""

    perm: np.ndarray
    position: np.ndarray

    @classmethod
    def from_perm(cls, perm) -> "VertexOrder":
        perm = np.asarray(perm, dtype=np.int64)
        n = perm.size
        if not np.array_equal(np.sort(perm), np.arange(n)):
            raise ValueError("order is not a permutation of 0..n-1")
        position = np.empty(n, dtype=np.int64)
        position[perm] = np.arange(n, dtype=np.int64)
        perm.flags.writeable = False
        position.flags.writeable = False
        return cls(perm, position)

    @property
    def n(self) -> int:
        return int(self.perm.size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VertexOrder):
            return NotImplemented
        return np.array_equal(self.perm, other.perm)

    def __hash__(self) -> int:
        return hash(self.perm.tobytes())


def uniform_order(n: int, seed: int) -> VertexOrder:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    return VertexOrder.from_perm(rng.permutation(n))


@dataclass(frozen=True)
class GreedyTrace:
    """Complete record of one greedy run.

    The uncovered sets are stored as removal steps: ``removed_at[v] = t``
    means ``v`` left the uncovered set during step ``t`` (1-based), so
    ``U_t = {v : removed_at[v] >= t}``.
    """

    order: VertexOrder
    chosen: np.ndarray
    removed_at: np.ndarray
    residual_max_degree: np.ndarray  # entry t-1 is the max degree of G[U_t]
    uncovered_size: np.ndarray  # entry t-1 is |U_t|

    @property
    def n(self) -> int:
        return self.order.n

    def uncovered_at(self, t: int) -> np.ndarray:
        if not 1 <= t <= self.n + 1:
            raise IndexError(f"step {t} outside 1..{self.n + 1}")
        return self.removed_at >= t

    def residual_max_degree_at(self, t: int) -> int:
        if t == self.n + 1:
            return 0
        return int(self.residual_max_degree[t - 1])

    def chosen_up_to(self, k: int) -> np.ndarray:
        """Vertices chosen among the first ``k`` ranks."""
        return self.chosen & (self.order.position < k)


def greedy_mis(g: Graph, order: VertexOrder) -> GreedyTrace:
    if order.n != g.n:
        raise ValueError(f"order covers {order.n} vertices, graph has {g.n}")
    chosen, removed_at, resid, sizes = greedy_trace(g.indptr, g.indices, np.ascontiguousarray(order.perm))
    return GreedyTrace(order, chosen, removed_at, resid, sizes)


def sparsity_bound(n: int, t: int) -> float:
    return 10.0 * math.log(n) * n / t


class SparsityViolation(NamedTuple):
    t: int
    degree: int
    bound: float


def check_residual_sparsity(trace: GreedyTrace, n: int | None = None) -> list[SparsityViolation]:
    """Every step ``t`` in ``[1, n)`` whose residual max degree exceeds ``10 ln(n) n / t``."""
    n = trace.n if n is None else n
    if n < 2:
        return []
    t = np.arange(1, n, dtype=np.int64)
    bound = 10.0 * math.log(n) * n / t
    deg = trace.residual_max_degree[: n - 1]
    bad = np.flatnonzero(deg > bound)
    return [SparsityViolation(int(t[i]), int(deg[i]), float(bound[i])) for i in bad]


def write_trace_csv(trace: GreedyTrace, path: str | Path) -> None:
    n = trace.n
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "uncovered", "residual_max_degree", "bound", "violated"])
        for t in range(1, n):
            deg = int(trace.residual_max_degree[t - 1])
            bound = sparsity_bound(n, t)
            w.writerow([t, int(trace.uncovered_size[t - 1]), deg, f"{bound:.6g}", int(deg > bound)])
