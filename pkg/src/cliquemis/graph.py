"""Immutable simple undirected graphs in CSR form, plus generators and I/O.

Vertex subsets are plain boolean numpy masks of length ``n``.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

import numpy as np

__all__ = [
    "Graph",
    "gnp_random",
    "random_regular",
    "induced_subgraph",
    "max_degree",
    "closed_neighborhood",
    "subset",
    "neighbor_rows",
    "read_edge_list",
    "write_edge_list",
]


class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    Adjacency is stored as CSR arrays with every row sorted ascending, so
    iteration order is fixed and the only randomness downstream is seeded.
    """

    __slots__ = ("n", "indptr", "indices", "_degrees")

    def __init__(self, n: int, indptr: np.ndarray, indices: np.ndarray):
        self.n = int(n)
        self.indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        self.indices = np.ascontiguousarray(indices, dtype=np.int64)
        self.indptr.flags.writeable = False
        self.indices.flags.writeable = False
        self._degrees = np.diff(self.indptr)
        self._degrees.flags.writeable = False

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]] | np.ndarray) -> "Graph":
        if n < 0:
            raise ValueError(f"vertex count must be non-negative, got {n}")
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        arr = arr.reshape(-1, 2)
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise ValueError("edge endpoint out of range")
        if np.any(arr[:, 0] == arr[:, 1]):
            raise ValueError("self-loops are not allowed")
        lo = np.minimum(arr[:, 0], arr[:, 1])
        hi = np.maximum(arr[:, 0], arr[:, 1])
        key = lo * max(n, 1) + hi
        if np.unique(key).size != key.size:
            raise ValueError("duplicate edges are not allowed")
        return cls._from_unique_pairs(n, lo, hi)

    @classmethod
    def _from_unique_pairs(cls, n: int, lo: np.ndarray, hi: np.ndarray) -> "Graph":
        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        return cls(n, indptr, dst)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, np.zeros(n + 1, dtype=np.int64), np.zeros(0, dtype=np.int64))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        lo, hi = np.triu_indices(n, k=1)
        return cls._from_unique_pairs(n, lo.astype(np.int64), hi.astype(np.int64))

    @property
    def degrees(self) -> np.ndarray:
        return self._degrees

    @property
    def edge_count(self) -> int:
        return int(self.indices.size // 2)

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self._degrees[v])

    def has_edge(self, u: int, v: int) -> bool:
        row = self.neighbors(u)
        i = np.searchsorted(row, v)
        return bool(i < row.size and row[i] == v)

    def edges(self) -> np.ndarray:
        """All edges as an ``(m, 2)`` array with ``u < v``, lexicographically sorted."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self._degrees)
        keep = src < self.indices
        return np.column_stack([src[keep], self.indices[keep]])

    def edge_set(self) -> set[tuple[int, int]]:
        return {(int(u), int(v)) for u, v in self.edges()}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    def __hash__(self) -> int:
        return hash((self.n, self.indptr.tobytes(), self.indices.tobytes()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count})"


def subset(n: int, members: Iterable[int] = ()) -> np.ndarray:
    """Boolean membership mask over ``0..n-1``."""
    mask = np.zeros(n, dtype=bool)
    idx = np.fromiter(members, dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= n):
        raise ValueError("subset member out of range")
    mask[idx] = True
    return mask


def _pair_index_to_edges(n: int, lin: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # row u owns linear indices [off[u], off[u+1]) covering pairs (u, u+1..n-1)
    u_all = np.arange(n, dtype=np.int64)
    off = u_all * (2 * n - u_all - 1) // 2
    u = np.searchsorted(off, lin, side="right") - 1
    v = lin - off[u] + u + 1
    return u, v


def gnp_random(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi G(n, p) via geometric skipping over the ``n(n-1)/2`` pairs."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0.0 <= p <= 1.0 or p != p:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    total = n * (n - 1) // 2
    if p == 0.0 or total == 0:
        return Graph.empty(n)
    if p == 1.0:
        return Graph.complete(n)

    rng = np.random.default_rng(seed)
    chunks = []
    pos = -1
    while True:
        remaining = total - pos - 1
        size = int(remaining * p + 4.0 * np.sqrt(remaining * p) + 64)
        cand = pos + np.cumsum(rng.geometric(p, size=size))
        inside = cand[cand < total]
        chunks.append(inside)
        if inside.size < cand.size:
            break
        pos = int(cand[-1])
    lin = np.concatenate(chunks)
    u, v = _pair_index_to_edges(n, lin)
    return Graph._from_unique_pairs(n, u, v)


def random_regular(n: int, d: int, seed: int, max_sweeps: int = 10_000) -> Graph:
    """Random simple d-regular graph from a configuration-model pairing.

    Invalid pairs (loops, parallel edges) are repaired by random double-edge
    swaps against other pairs; a swap is accepted only if both new pairs are
    valid, so the result is always simple.
    """
    if d < 0 or (d > 0 and d >= n):
        raise ValueError(f"degree {d} impossible on {n} vertices")
    if (n * d) % 2:
        raise ValueError("n * d must be even")
    if d == 0:
        return Graph.empty(n)
    if 2 * d > n - 1:
        # dense case: repair swaps get stuck, so build the sparse complement
        return _complement(random_regular(n, n - 1 - d, seed, max_sweeps))

    rng = np.random.default_rng(seed)
    stubs = rng.permutation(np.repeat(np.arange(n, dtype=np.int64), d))
    pairs = stubs.reshape(-1, 2)
    pairs.sort(axis=1)
    m = pairs.shape[0]

    counts: dict[tuple[int, int], int] = {}
    for a, b in pairs.tolist():
        counts[(a, b)] = counts.get((a, b), 0) + 1

    def bad(i: int) -> bool:
        a, b = int(pairs[i, 0]), int(pairs[i, 1])
        return a == b or counts[(a, b)] > 1

    pending = [i for i in range(m) if bad(i)]
    sweeps = 0
    while pending:
        sweeps += 1
        if sweeps > max_sweeps * max(1, len(pending)):
            raise RuntimeError("random_regular failed to repair pairing")
        i = pending[-1]
        if not bad(i):
            pending.pop()
            continue
        j = int(rng.integers(m))
        if j == i:
            continue
        a, b = int(pairs[i, 0]), int(pairs[i, 1])
        c, e = int(pairs[j, 0]), int(pairs[j, 1])
        if rng.random() < 0.5:
            c, e = e, c
        x, y = (a, c) if a < c else (c, a)
        z, w = (b, e) if b < e else (e, b)
        if x == y or z == w or (x, y) == (z, w) or counts.get((x, y), 0) or counts.get((z, w), 0):
            continue
        for key in ((a, b) if a < b else (b, a), (c, e) if c < e else (e, c)):
            counts[key] -= 1
            if not counts[key]:
                del counts[key]
        counts[(x, y)] = 1
        counts[(z, w)] = 1
        pairs[i] = (x, y)
        pairs[j] = (z, w)
        pending.extend(k for k in (i, j) if bad(k))
    return Graph._from_unique_pairs(n, pairs[:, 0].copy(), pairs[:, 1].copy())


def _complement(g: Graph) -> Graph:
    n = g.n
    lo, hi = np.triu_indices(n, k=1)
    present = np.zeros(n * n, dtype=bool)
    e = g.edges()
    present[e[:, 0] * n + e[:, 1]] = True
    keep = ~present[lo * n + hi]
    return Graph._from_unique_pairs(n, lo[keep].astype(np.int64), hi[keep].astype(np.int64))


def induced_subgraph(g: Graph, s: np.ndarray) -> tuple[Graph, np.ndarray]:
    """Subgraph induced by mask ``s``, re-indexed densely.

    Returns ``(h, old_ids)`` where vertex ``i`` of ``h`` is ``old_ids[i]`` in ``g``.
    """
    s = np.asarray(s, dtype=bool)
    if s.shape != (g.n,):
        raise ValueError("subset mask has wrong length")
    old_ids = np.flatnonzero(s)
    new_id = np.full(g.n, -1, dtype=np.int64)
    new_id[old_ids] = np.arange(old_ids.size)
    e = g.edges()
    keep = s[e[:, 0]] & s[e[:, 1]]
    e = e[keep]
    h = Graph._from_unique_pairs(old_ids.size, new_id[e[:, 0]], new_id[e[:, 1]])
    return h, old_ids


def max_degree(g: Graph) -> int:
    return int(g.degrees.max()) if g.n else 0


def closed_neighborhood(g: Graph, s: np.ndarray) -> np.ndarray:
    s = np.asarray(s, dtype=bool)
    out = s.copy()
    out[neighbor_rows(g, np.flatnonzero(s))] = True
    return out


def neighbor_rows(g: Graph, members: np.ndarray) -> np.ndarray:
    """Concatenated adjacency rows of ``members`` (with repetition), in order."""
    members = np.asarray(members, dtype=np.int64)
    starts = g.indptr[members]
    lens = g.indptr[members + 1] - starts
    total = int(lens.sum())
    if not total:
        return np.zeros(0, dtype=np.int64)
    first = np.cumsum(lens) - lens
    return g.indices[np.repeat(starts - first, lens) + np.arange(total)]


def write_edge_list(g: Graph, path: str | Path) -> None:
    e = g.edges()
    with open(path, "w") as fh:
        fh.write(f"{g.n} {e.shape[0]}\n")
        for u, v in e.tolist():
            fh.write(f"{u} {v}\n")


def read_edge_list(path: str | Path) -> Graph:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError(f"{path}: expected header 'n m'")
        n, m = int(header[0]), int(header[1])
        data = np.loadtxt(fh, dtype=np.int64, ndmin=2) if m else np.zeros((0, 2), dtype=np.int64)
    if data.shape != (m, 2):
        raise ValueError(f"{path}: header declares {m} edges, found {data.shape[0]}")
    if m and np.any(data[:, 0] >= data[:, 1]):
        raise ValueError(f"{path}: edges must be written as 'u v' with u < v")
    return Graph.from_edges(n, data)
