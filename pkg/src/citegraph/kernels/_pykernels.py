"""Pure-Python kernel implementations.

These are the reference algorithms; the Cython module mirrors them
statement for statement. Keep the arithmetic expression shapes in sync:
cross-backend tests assert bit-identical outputs.
"""

from __future__ import annotations

import numpy as np

_M64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _splitmix_next(state: int) -> tuple[int, int]:
    state = (state + _GOLDEN) & _M64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    return state, z ^ (z >> 31)


def _shuffle(order: list[int], state: int) -> int:
    for i in range(len(order) - 1, 0, -1):
        state, z = _splitmix_next(state)
        j = z % (i + 1)
        order[i], order[j] = order[j], order[i]
    return state


def kcore_mask(indptr, indices, k: int):
    """Peel nodes of undirected degree < k until none remain.

    indptr/indices describe the undirected adjacency in CSR form. Returns a
    uint8 mask of surviving nodes; the classical k-core, order-independent.
    """
    n = len(indptr) - 1
    alive = np.ones(n, dtype=np.uint8)
    if k <= 0:
        return alive
    deg = [int(indptr[v + 1] - indptr[v]) for v in range(n)]
    indptr_l = indptr.tolist()
    indices_l = indices.tolist()
    stack = [v for v in range(n) if deg[v] < k]
    while stack:
        v = stack.pop()
        if not alive[v]:
            continue
        alive[v] = 0
        for p in range(indptr_l[v], indptr_l[v + 1]):
            u = indices_l[p]
            if alive[u]:
                deg[u] -= 1
                if deg[u] == k - 1:
                    stack.append(u)
    return alive


def local_move_weighted(indptr, indices, weights, self_w, strength, m: int, gamma: float, seed: int):
    """Local moving on a weighted graph until no move improves quality.

    Works on one level of the multi-level optimizer: nodes may be original
    publications or aggregated communities (then self_w carries internal
    weight and strength includes it twice). Each pass visits nodes in a
    fresh seeded random order and moves a node to the neighboring community
    with the largest strictly positive modularity gain at resolution gamma
    (first such community in adjacency order wins ties); moving out into an
    empty community is considered too. m is the total relation count of the
    original graph and never changes across levels.

    Returns an int64 label array; labels are arbitrary but deterministic
    given the inputs.
    """
    n = len(indptr) - 1
    labels = list(range(n))
    if n == 0 or m == 0:
        return np.array(labels, dtype=np.int64)
    indptr_l = indptr.tolist()
    indices_l = indices.tolist()
    weights_l = weights.tolist()
    strength_l = strength.tolist()

    inv_m = 1.0 / m
    half_inv_m2 = 0.5 * inv_m * inv_m
    comm_strength = strength_l.copy()
    comm_size = [1] * n
    free: list[int] = []
    nbw = [0] * n
    touched = [0] * n
    order = list(range(n))
    state = seed & _M64

    while True:
        moves = 0
        state = _shuffle(order, state)
        for oi in range(n):
            v = order[oi]
            a = labels[v]
            s_v = strength_l[v]
            t = 0
            for p in range(indptr_l[v], indptr_l[v + 1]):
                c = labels[indices_l[p]]
                if nbw[c] == 0:
                    touched[t] = c
                    t += 1
                nbw[c] += weights_l[p]
            k_va = nbw[a]
            sigma_a = comm_strength[a] - s_v
            best_gain = 0.0
            best_c = a
            for ti in range(t):
                c = touched[ti]
                if c == a:
                    continue
                gain = (nbw[c] - k_va) * inv_m - gamma * s_v * (comm_strength[c] - sigma_a) * half_inv_m2
                if gain > best_gain:
                    best_gain = gain
                    best_c = c
            if comm_size[a] > 1:
                gain = (0 - k_va) * inv_m - gamma * s_v * (0 - sigma_a) * half_inv_m2
                if gain > best_gain:
                    best_gain = gain
                    best_c = -1
            for ti in range(t):
                nbw[touched[ti]] = 0
            if best_c != a:
                comm_strength[a] -= s_v
                comm_size[a] -= 1
                if comm_size[a] == 0:
                    free.append(a)
                if best_c == -1:
                    best_c = free.pop()
                labels[v] = best_c
                comm_strength[best_c] += s_v
                comm_size[best_c] += 1
                moves += 1
        if moves == 0:
            break

    return np.array(labels, dtype=np.int64)
