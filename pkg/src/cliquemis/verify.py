"""Independent checkers: MIS validity with witnesses, and exhaustive enumeration."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from cliquemis.graph import Graph

BRUTE_FORCE_LIMIT = 20


class SizeLimit(ValueError):
    pass


@dataclass(frozen=True)
class MISCheck:
    ok: bool
    edge: tuple[int, int] | None = None  # two members that are adjacent
    vertex: int | None = None  # non-member with no neighbour in the set

    def __bool__(self) -> bool:
        return self.ok


def verify_mis(g: Graph, members) -> MISCheck:
    """Check that ``members`` (mask or iterable of ids) is a maximal independent set."""
    mask = _as_mask(g.n, members)
    e = g.edges()
    both = mask[e[:, 0]] & mask[e[:, 1]]
    if both.any():
        u, v = e[np.argmax(both)]
        return MISCheck(False, edge=(int(u), int(v)))
    dominated = mask.copy()
    src = np.repeat(np.arange(g.n), g.degrees)
    dominated[g.indices[mask[src]]] = True
    if not dominated.all():
        return MISCheck(False, vertex=int(np.argmin(dominated)))
    return MISCheck(True)


def _as_mask(n: int, members) -> np.ndarray:
    arr = np.asarray(members)
    if arr.dtype == bool:
        if arr.shape != (n,):
            raise ValueError("mask has wrong length")
        return arr
    mask = np.zeros(n, dtype=bool)
    idx = np.asarray(list(members), dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= n):
        raise ValueError("set member out of range")
    mask[idx] = True
    return mask


def brute_force_all_mis(g: Graph) -> set[frozenset[int]]:
    """All maximal independent sets, as maximal cliques of the complement
    (Bron-Kerbosch with pivoting on bitmasks)."""
    n = g.n
    if n > BRUTE_FORCE_LIMIT:
        raise SizeLimit(f"exhaustive enumeration limited to n <= {BRUTE_FORCE_LIMIT}, got {n}")
    full = (1 << n) - 1
    non_adj = []
    for v in range(n):
        bits = 0
        for w in g.neighbors(v).tolist():
            bits |= 1 << w
        non_adj.append(full & ~bits & ~(1 << v))

    found: set[frozenset[int]] = set()

    def expand(r: int, p: int, x: int) -> None:
        if not p and not x:
            found.add(frozenset(i for i in range(n) if r >> i & 1))
            return
        pivot_pool = p | x
        pivot = max(_bits(pivot_pool), key=lambda u: (p & non_adj[u]).bit_count())
        for v in _bits(p & ~non_adj[pivot]):
            expand(r | 1 << v, p & non_adj[v], x & non_adj[v])
            p &= ~(1 << v)
            x |= 1 << v

    expand(0, full, 0)
    return found


def _bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1
