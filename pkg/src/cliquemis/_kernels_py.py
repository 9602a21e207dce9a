"""Pure-Python reference versions of the compiled kernels in ``_kernels.pyx``."""

from __future__ import annotations

import numpy as np


def greedy_trace(indptr: np.ndarray, indices: np.ndarray, perm: np.ndarray):
    """Random-order greedy with incremental residual max degree.

    Returns ``(chosen, removed_at, resid_max, u_size)``: ``removed_at[v]`` is
    the 1-based step that removed ``v`` from the uncovered set, and entry
    ``t-1`` of ``resid_max`` / ``u_size`` describes the uncovered set at the
    start of step ``t``.
    """
    n = len(indptr) - 1
    ptr = indptr.tolist()
    nbr = indices.tolist()
    cnt = [ptr[v + 1] - ptr[v] for v in range(n)]
    bucket = [0] * (n + 1)
    for c in cnt:
        bucket[c] += 1
    maxd = max(cnt, default=0)
    in_u = [True] * n
    chosen = [False] * n
    removed = [0] * n
    resid = [0] * n
    sizes = [0] * n
    usize = n

    for t, v in enumerate(perm.tolist()):
        while maxd > 0 and bucket[maxd] == 0:
            maxd -= 1
        resid[t] = maxd
        sizes[t] = usize
        if not in_u[v]:
            continue
        chosen[v] = True
        for x in [v] + nbr[ptr[v] : ptr[v + 1]]:
            if not in_u[x]:
                continue
            in_u[x] = False
            removed[x] = t + 1
            usize -= 1
            bucket[cnt[x]] -= 1
            for y in nbr[ptr[x] : ptr[x + 1]]:
                if in_u[y]:
                    c = cnt[y]
                    bucket[c] -= 1
                    bucket[c - 1] += 1
                    cnt[y] = c - 1

    return (
        np.array(chosen, dtype=bool),
        np.array(removed, dtype=np.int64),
        np.array(resid, dtype=np.int64),
        np.array(sizes, dtype=np.int64),
    )


def residual_degrees(indptr: np.ndarray, indices: np.ndarray, mask) -> np.ndarray:
    mask = np.asarray(mask, dtype=bool)
    n = len(indptr) - 1
    src = np.repeat(np.arange(n, dtype=np.int64), np.diff(indptr))
    keep = mask[src] & mask[indices]
    return np.bincount(src[keep], minlength=n).astype(np.int64)
