# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Signatures match ``cliquemis._kernels_py``."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int64_t i64


def greedy_trace(const i64[::1] indptr, const i64[::1] indices, const i64[::1] perm):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t t, j, k, v, x, y, maxd = 0, usize = n
    cdef Py_ssize_t nbr_end

    chosen_arr = np.zeros(n, dtype=np.uint8)
    removed_arr = np.zeros(n, dtype=np.int64)
    resid_arr = np.zeros(n, dtype=np.int64)
    usize_arr = np.zeros(n, dtype=np.int64)
    cnt_arr = np.empty(n, dtype=np.int64)
    in_u_arr = np.ones(n, dtype=np.uint8)
    bucket_arr = np.zeros(n + 1, dtype=np.int64)

    cdef cnp.uint8_t[::1] chosen = chosen_arr
    cdef i64[::1] removed = removed_arr
    cdef i64[::1] resid = resid_arr
    cdef i64[::1] sizes = usize_arr
    cdef i64[::1] cnt = cnt_arr
    cdef cnp.uint8_t[::1] in_u = in_u_arr
    cdef i64[::1] bucket = bucket_arr

    for v in range(n):
        cnt[v] = indptr[v + 1] - indptr[v]
        bucket[cnt[v]] += 1
        if cnt[v] > maxd:
            maxd = cnt[v]

    for t in range(n):
        while maxd > 0 and bucket[maxd] == 0:
            maxd -= 1
        resid[t] = maxd
        sizes[t] = usize
        v = perm[t]
        if not in_u[v]:
            continue
        chosen[v] = 1
        # v first, then each still-uncovered neighbour
        for k in range(-1, indptr[v + 1] - indptr[v]):
            if k < 0:
                x = v
            else:
                x = indices[indptr[v] + k]
                if not in_u[x]:
                    continue
            in_u[x] = 0
            removed[x] = t + 1
            usize -= 1
            bucket[cnt[x]] -= 1
            nbr_end = indptr[x + 1]
            for j in range(indptr[x], nbr_end):
                y = indices[j]
                if in_u[y]:
                    bucket[cnt[y]] -= 1
                    cnt[y] -= 1
                    bucket[cnt[y]] += 1

    return chosen_arr.astype(bool), removed_arr, resid_arr, usize_arr


def residual_degrees(const i64[::1] indptr, const i64[::1] indices, mask):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t v, j
    cdef i64 c
    cdef const cnp.uint8_t[::1] m = np.ascontiguousarray(mask, dtype=np.uint8)
    out_arr = np.zeros(n, dtype=np.int64)
    cdef i64[::1] out = out_arr
    for v in range(n):
        if not m[v]:
            continue
        c = 0
        for j in range(indptr[v], indptr[v + 1]):
            if m[indices[j]]:
                c += 1
        out[v] = c
    return out_arr
