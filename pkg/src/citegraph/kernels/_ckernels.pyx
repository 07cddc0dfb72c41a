# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: mirrors _pykernels statement for statement.

Arithmetic expression shapes must stay in sync with the pure-Python module;
cross-backend tests assert bit-identical outputs (the extension is compiled
with -ffp-contract=off to keep that true).
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

ctypedef unsigned long long u64

cdef u64 _GOLDEN = 0x9E3779B97F4A7C15ULL


cdef inline u64 _splitmix_value(u64* state) nogil:
    state[0] = state[0] + _GOLDEN
    cdef u64 z = state[0]
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef void _shuffle(cnp.int64_t[::1] order, u64* state) nogil:
    cdef Py_ssize_t i, j
    cdef cnp.int64_t tmp
    for i in range(order.shape[0] - 1, 0, -1):
        j = <Py_ssize_t>(_splitmix_value(state) % <u64>(i + 1))
        tmp = order[i]
        order[i] = order[j]
        order[j] = tmp


def kcore_mask(indptr_arr, indices_arr, int k):
    """Peel nodes of undirected degree < k until none remain."""
    cdef cnp.int64_t[::1] indptr = np.ascontiguousarray(indptr_arr, dtype=np.int64)
    cdef cnp.int32_t[::1] indices = np.ascontiguousarray(indices_arr, dtype=np.int32)
    cdef Py_ssize_t n = indptr.shape[0] - 1
    alive_arr = np.ones(n, dtype=np.uint8)
    cdef cnp.uint8_t[::1] alive = alive_arr
    if k <= 0:
        return alive_arr
    deg_arr = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] deg = deg_arr
    stack_arr = np.empty(max(n, 1), dtype=np.int64)
    cdef cnp.int64_t[::1] stack = stack_arr
    cdef Py_ssize_t top = 0
    cdef Py_ssize_t v, u, p
    with nogil:
        for v in range(n):
            deg[v] = indptr[v + 1] - indptr[v]
        for v in range(n):
            if deg[v] < k:
                stack[top] = v
                top += 1
        while top > 0:
            top -= 1
            v = stack[top]
            if alive[v] == 0:
                continue
            alive[v] = 0
            for p in range(indptr[v], indptr[v + 1]):
                u = indices[p]
                if alive[u]:
                    deg[u] -= 1
                    if deg[u] == k - 1:
                        stack[top] = u
                        top += 1
    return alive_arr


def local_move_labels(indptr_arr, indices_arr, double gamma, object seed):
    """One seeded restart of local moving plus cluster-merge refinement.

    Same algorithm and visit discipline as the pure backend; see there for
    the full description.
    """
    cdef cnp.int64_t[::1] indptr = np.ascontiguousarray(indptr_arr, dtype=np.int64)
    cdef cnp.int32_t[::1] indices = np.ascontiguousarray(indices_arr, dtype=np.int32)
    cdef Py_ssize_t n = indptr.shape[0] - 1
    if n == 0:
        return np.empty(0, dtype=np.int64)

    labels_arr = np.arange(n, dtype=np.int64)
    cdef cnp.int64_t[::1] labels = labels_arr
    deg_arr = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] deg = deg_arr
    cdef Py_ssize_t v
    cdef long long total = 0
    for v in range(n):
        deg[v] = indptr[v + 1] - indptr[v]
        total += deg[v]
    cdef long long m = total // 2
    if m == 0:
        return labels_arr

    cdef double inv_m = 1.0 / m
    cdef double half_inv_m2 = 0.5 * inv_m * inv_m

    comm_deg_arr = deg_arr.copy()
    cdef cnp.int64_t[::1] comm_deg = comm_deg_arr
    comm_size_arr = np.ones(n, dtype=np.int64)
    cdef cnp.int64_t[::1] comm_size = comm_size_arr
    free_arr = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] free = free_arr
    cdef Py_ssize_t free_top = 0
    nbw_arr = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[::1] nbw = nbw_arr
    touched_arr = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] touched = touched_arr
    order_arr = np.arange(n, dtype=np.int64)
    cdef cnp.int64_t[::1] order = order_arr

    cdef u64 state = <u64>(<object>seed & ((1 << 64) - 1))

    cdef bint anything_changed, merged_any, sweep_merged
    cdef Py_ssize_t moves, oi, p, ti, t
    cdef cnp.int64_t a, c, best_c, d_v, k_va, sigma_a, u, b
    cdef double best_gain, gain
    cdef dict nbr, alias, row, row_other
    cdef list keys_snapshot
    cdef object okey, oval
    cdef long long e_cp

    while True:
        anything_changed = False

        # local moving until a full pass makes no move
        while True:
            moves = 0
            _shuffle(order, &state)
            with nogil:
                for oi in range(n):
                    v = order[oi]
                    a = labels[v]
                    d_v = deg[v]
                    t = 0
                    for p in range(indptr[v], indptr[v + 1]):
                        c = labels[indices[p]]
                        if nbw[c] == 0:
                            touched[t] = c
                            t += 1
                        nbw[c] += 1
                    k_va = nbw[a]
                    sigma_a = comm_deg[a] - d_v
                    best_gain = 0.0
                    best_c = a
                    for ti in range(t):
                        c = touched[ti]
                        if c == a:
                            continue
                        gain = (nbw[c] - k_va) * inv_m - gamma * d_v * (comm_deg[c] - sigma_a) * half_inv_m2
                        if gain > best_gain:
                            best_gain = gain
                            best_c = c
                    if comm_size[a] > 1:
                        gain = (0 - k_va) * inv_m - gamma * d_v * (0 - sigma_a) * half_inv_m2
                        if gain > best_gain:
                            best_gain = gain
                            best_c = -1
                    for ti in range(t):
                        nbw[touched[ti]] = 0
                    if best_c != a:
                        comm_deg[a] -= d_v
                        comm_size[a] -= 1
                        if comm_size[a] == 0:
                            free[free_top] = a
                            free_top += 1
                        if best_c == -1:
                            free_top -= 1
                            best_c = free[free_top]
                        labels[v] = best_c
                        comm_deg[best_c] += d_v
                        comm_size[best_c] += 1
                        moves += 1
            if moves == 0:
                break
            anything_changed = True

        # merge refinement on the community graph
        nbr = {}
        for v in range(n):
            a = labels[v]
            for p in range(indptr[v], indptr[v + 1]):
                u = indices[p]
                if u <= v:
                    continue
                b = labels[u]
                if a == b:
                    continue
                row = nbr.setdefault(a, {})
                row[b] = row.get(b, 0) + 1
                row = nbr.setdefault(b, {})
                row[a] = row.get(a, 0) + 1
        alias = {}
        merged_any = False
        while True:
            sweep_merged = False
            keys_snapshot = sorted(nbr.keys())
            for okey in keys_snapshot:
                c = okey
                if c in alias:
                    continue
                while True:
                    best_gain = 0.0
                    best_c = -1
                    row = nbr[c]
                    for okey, oval in row.items():
                        u = okey
                        e_cp = oval
                        gain = e_cp * inv_m - gamma * comm_deg[c] * comm_deg[u] * half_inv_m2
                        if gain > best_gain:
                            best_gain = gain
                            best_c = u
                    if best_c < 0:
                        break
                    alias[best_c] = c
                    comm_deg[c] += comm_deg[best_c]
                    comm_size[c] += comm_size[best_c]
                    row_other = nbr[best_c]
                    for okey, oval in row_other.items():
                        u = okey
                        if u == c:
                            continue
                        row = nbr[c]
                        row[u] = row.get(u, 0) + oval
                        row = nbr[u]
                        row[c] = row.get(c, 0) + oval
                        del row[best_c]
                    del nbr[c][best_c]
                    del nbr[best_c]
                    sweep_merged = True
                    merged_any = True
            if not sweep_merged:
                break
        if merged_any:
            for v in range(n):
                c = labels[v]
                while c in alias:
                    c = alias[c]
                labels[v] = c
            for okey in alias:
                c = okey
                comm_deg[c] = 0
                comm_size[c] = 0
                free[free_top] = c
                free_top += 1
            anything_changed = True

        if not anything_changed:
            break

    return labels_arr
