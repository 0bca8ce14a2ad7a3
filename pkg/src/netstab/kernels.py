"""Array kernels behind the graph and numeric routines.

Every function here takes and returns plain numpy arrays / scalars so it can
run either compiled (numba) or as ordinary Python; see :mod:`netstab._jit`.
Indices are 0-based inside this module.
"""

import numpy as np

from ._jit import jit

_INF = np.int64(1) << np.int64(60)


@jit
def hopcroft_karp(indptr, indices, n_cols, row_active):
    """Maximum bipartite matching between rows and columns.

    ``indptr``/``indices`` give, in CSR form, the columns adjacent to each row.
    Rows with ``row_active[r] == False`` are ignored.

    Returns ``(match_row, match_col)`` with -1 marking unmatched vertices.
    """
    n_rows = indptr.shape[0] - 1
    match_row = np.full(n_rows, -1, dtype=np.int64)
    match_col = np.full(n_cols, -1, dtype=np.int64)
    dist = np.empty(n_rows, dtype=np.int64)
    queue = np.empty(n_rows, dtype=np.int64)
    it = np.empty(n_rows, dtype=np.int64)
    stack = np.empty(n_rows + 1, dtype=np.int64)
    colstack = np.empty(n_rows + 1, dtype=np.int64)

    while True:
        # BFS layering from free rows; `limit` is the layer of the first free column
        head = 0
        tail = 0
        for r in range(n_rows):
            if row_active[r] and match_row[r] == -1:
                dist[r] = 0
                queue[tail] = r
                tail += 1
            else:
                dist[r] = _INF
        limit = _INF
        while head < tail:
            r = queue[head]
            head += 1
            if dist[r] > limit:
                continue
            for k in range(indptr[r], indptr[r + 1]):
                r2 = match_col[indices[k]]
                if r2 == -1:
                    if limit == _INF:
                        limit = dist[r]
                elif dist[r2] == _INF:
                    dist[r2] = dist[r] + 1
                    queue[tail] = r2
                    tail += 1
        if limit == _INF:
            break

        # DFS along the layers, vertex-disjoint augmenting paths
        for r in range(n_rows):
            it[r] = indptr[r]
        for r0 in range(n_rows):
            if not row_active[r0] or match_row[r0] != -1 or dist[r0] != 0:
                continue
            sp = 0
            stack[0] = r0
            while sp >= 0:
                r = stack[sp]
                advanced = False
                while it[r] < indptr[r + 1]:
                    c = indices[it[r]]
                    it[r] += 1
                    r2 = match_col[c]
                    if r2 == -1:
                        if dist[r] == limit:
                            colstack[sp] = c
                            for lvl in range(sp, -1, -1):
                                rr = stack[lvl]
                                cc = colstack[lvl]
                                match_row[rr] = cc
                                match_col[cc] = rr
                            sp = -1
                            advanced = True
                            break
                    elif dist[r2] == dist[r] + 1 and dist[r2] <= limit:
                        colstack[sp] = c
                        sp += 1
                        stack[sp] = r2
                        advanced = True
                        break
                if not advanced:
                    dist[r] = _INF
                    sp -= 1
    return match_row, match_col


@jit
def jacobi_eigh(a, atol, max_sweeps):
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Sweeps until the off-diagonal Frobenius norm drops below
    ``max(atol, 4 eps ||a||_F)``.  Returns ``(w, v, sweeps)`` with eigenvalues
    ascending and ``a ~= v @ diag(w) @ v.T``.
    """
    n = a.shape[0]
    m = a.copy()
    v = np.eye(n)
    fro = 0.0
    for i in range(n):
        for j in range(n):
            fro += m[i, j] * m[i, j]
    thresh = max(atol, 4.0 * 2.220446049250313e-16 * np.sqrt(fro))

    sweeps = 0
    for sweep in range(max_sweeps):
        off = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                off += 2.0 * m[i, j] * m[i, j]
        if np.sqrt(off) <= thresh:
            break
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = m[p, q]
                if apq == 0.0:
                    continue
                theta = (m[q, q] - m[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    # theta**2 would overflow; tan of the rotation angle is ~1 / (2 theta)
                    t = 0.5 / theta
                elif theta >= 0.0:
                    t = 1.0 / (theta + np.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    mkp = m[k, p]
                    mkq = m[k, q]
                    m[k, p] = c * mkp - s * mkq
                    m[k, q] = s * mkp + c * mkq
                for k in range(n):
                    mpk = m[p, k]
                    mqk = m[q, k]
                    m[p, k] = c * mpk - s * mqk
                    m[q, k] = s * mpk + c * mqk
                m[p, q] = 0.0
                m[q, p] = 0.0
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * vkq
                    v[k, q] = s * vkp + c * vkq

    w = np.empty(n)
    for i in range(n):
        w[i] = m[i, i]
    order = np.argsort(w)
    return w[order], v[:, order], sweeps


@jit
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@jit
def max_independent_bitmask(adj, allowed):
    """Exact maximum independent set on at most 62 vertices.

    ``adj[v]`` is the neighbour bitmask of vertex ``v`` and ``allowed`` masks
    the vertices that may be chosen.  Branches include-before-exclude on the
    lowest candidate index and only accepts strict improvements, so among all
    maximum sets the one with the lexicographically smallest sorted index
    tuple is returned.
    """
    n = adj.shape[0]
    cap = 2 * n + 4
    st_cur = np.empty(cap, dtype=np.int64)
    st_cand = np.empty(cap, dtype=np.int64)
    st_size = np.empty(cap, dtype=np.int64)
    sp = 0
    st_cur[0] = 0
    st_cand[0] = allowed
    st_size[0] = 0
    sp = 1
    best = np.int64(0)
    best_size = -1
    while sp > 0:
        sp -= 1
        cur = st_cur[sp]
        cand = st_cand[sp]
        size = st_size[sp]
        if cand == 0:
            if size > best_size:
                best_size = size
                best = cur
            continue
        if size + _popcount(cand) <= best_size:
            continue
        v = 0
        while not (cand >> v) & 1:
            v += 1
        bit = np.int64(1) << v
        rest = cand & ~bit
        st_cur[sp] = cur
        st_cand[sp] = rest
        st_size[sp] = size
        sp += 1
        st_cur[sp] = cur | bit
        st_cand[sp] = rest & ~adj[v]
        st_size[sp] = size + 1
        sp += 1
    return best


@jit
def count_below(w, threshold):
    c = 0
    for x in w:
        if x < threshold:
            c += 1
    return c


def warmup() -> None:
    """Compile every kernel on tiny inputs (a no-op cost once numba's cache is warm)."""
    a = np.array([[0.0, 1.0], [1.0, 0.0]])
    w, _, _ = jacobi_eigh(a, 1e-12, 10)
    count_below(w, 0.0)
    hopcroft_karp(np.array([0, 1], dtype=np.int64), np.array([0], dtype=np.int64), 1, np.ones(1, dtype=np.bool_))
    max_independent_bitmask(np.zeros(2, dtype=np.int64), np.int64(3))
