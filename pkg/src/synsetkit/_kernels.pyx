# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels; semantics match ``synsetkit._pure`` exactly."""

import numpy as np

cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t

cnp.import_array()


cdef inline uint64_t _next(uint64_t *state) noexcept nogil:
    cdef uint64_t z
    state[0] = state[0] + <uint64_t>0x9E3779B97F4A7C15
    z = state[0]
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


def splitmix64(object state):
    cdef uint64_t s = <uint64_t>(state & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t out = _next(&s)
    return int(s), int(out)


def chinese_whispers(const int64_t[::1] indptr, const int64_t[::1] indices,
                     const double[::1] weights, const double[::1] node_weights,
                     object seed, int max_iterations):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    labels_arr = np.arange(n, dtype=np.int64)
    order_arr = np.arange(n, dtype=np.int64)
    tally_arr = np.zeros(max(n, 1), dtype=np.float64)
    seen_arr = np.zeros(max(n, 1), dtype=np.uint8)
    touched_arr = np.zeros(max(n, 1), dtype=np.int64)
    cdef int64_t[::1] labels = labels_arr
    cdef int64_t[::1] order = order_arr
    cdef double[::1] tally = tally_arr
    cdef cnp.uint8_t[::1] seen = seen_arr
    cdef int64_t[::1] touched = touched_arr
    cdef uint64_t state = <uint64_t>(seed & 0xFFFFFFFFFFFFFFFF)
    cdef int sweeps = 0
    cdef bint converged = False
    cdef Py_ssize_t i, j, t, nt, p, v, u
    cdef int64_t lab, best, tmp, changed
    cdef double w, best_w
    with nogil:
        while sweeps < max_iterations:
            i = n - 1
            while i > 0:
                j = <Py_ssize_t>(_next(&state) % <uint64_t>(i + 1))
                tmp = order[i]
                order[i] = order[j]
                order[j] = tmp
                i -= 1
            sweeps += 1
            changed = 0
            for t in range(n):
                v = order[t]
                if indptr[v] == indptr[v + 1]:
                    continue
                nt = 0
                for p in range(indptr[v], indptr[v + 1]):
                    u = indices[p]
                    lab = labels[u]
                    if not seen[lab]:
                        seen[lab] = 1
                        tally[lab] = 0.0
                        touched[nt] = lab
                        nt += 1
                    tally[lab] = tally[lab] + weights[p] * node_weights[u]
                best = -1
                best_w = 0.0
                for i in range(nt):
                    lab = touched[i]
                    w = tally[lab]
                    if best < 0 or w > best_w or (w == best_w and lab < best):
                        best = lab
                        best_w = w
                    seen[lab] = 0
                if best != labels[v]:
                    labels[v] = best
                    changed += 1
            if changed == 0:
                converged = True
                break
    return labels_arr, sweeps, converged


def induced_neighborhood(const int64_t[::1] indptr, const int64_t[::1] indices,
                         const double[::1] weights, int64_t ego):
    cdef int64_t start = indptr[ego]
    cdef int64_t end = indptr[ego + 1]
    cdef Py_ssize_t m = end - start
    members_arr = np.asarray(indices[start:end], dtype=np.int64).copy()
    cdef int64_t[::1] members = members_arr
    cdef Py_ssize_t i, a, lo, hi, mid, nnz = 0
    cdef int64_t x, y, p
    # first pass: count induced entries (binary search in the sorted member list)
    lptr_arr = np.zeros(m + 1, dtype=np.int64)
    cdef int64_t[::1] lptr = lptr_arr
    for i in range(m):
        x = members[i]
        for p in range(indptr[x], indptr[x + 1]):
            y = indices[p]
            lo = 0
            hi = m
            while lo < hi:
                mid = (lo + hi) >> 1
                if members[mid] < y:
                    lo = mid + 1
                else:
                    hi = mid
            if lo < m and members[lo] == y:
                nnz += 1
        lptr[i + 1] = nnz
    lind_arr = np.empty(nnz, dtype=np.int64)
    lw_arr = np.empty(nnz, dtype=np.float64)
    cdef int64_t[::1] lind = lind_arr
    cdef double[::1] lw = lw_arr
    a = 0
    for i in range(m):
        x = members[i]
        for p in range(indptr[x], indptr[x + 1]):
            y = indices[p]
            lo = 0
            hi = m
            while lo < hi:
                mid = (lo + hi) >> 1
                if members[mid] < y:
                    lo = mid + 1
                else:
                    hi = mid
            if lo < m and members[lo] == y:
                lind[a] = lo
                lw[a] = weights[p]
                a += 1
    return members_arr, lptr_arr, lind_arr, lw_arr


cdef int64_t _count_paths(const int64_t[::1] indptr, const int64_t[::1] indices,
                          const int64_t[::1] allowed, int64_t stamp,
                          cnp.uint8_t[::1] on_path, int64_t[::1] stack_v,
                          int64_t[::1] stack_p, int64_t src, int64_t dst,
                          int lo, int hi, int64_t cap) noexcept nogil:
    # iterative DFS; stack_v/stack_p hold the current path and the next
    # adjacency position to try at each depth
    cdef int64_t count = 0
    cdef int depth = 0
    cdef int64_t x, y, p
    if cap <= 0:
        return 0
    stack_v[0] = src
    stack_p[0] = indptr[src]
    on_path[src] = 1
    while depth >= 0:
        x = stack_v[depth]
        p = stack_p[depth]
        if p >= indptr[x + 1]:
            on_path[x] = 0
            depth -= 1
            continue
        stack_p[depth] = p + 1
        y = indices[p]
        if y == dst:
            if lo <= depth + 1 <= hi:
                count += 1
                if count >= cap:
                    break
        elif depth + 1 < hi and allowed[y] == stamp and not on_path[y]:
            depth += 1
            stack_v[depth] = y
            stack_p[depth] = indptr[y]
            on_path[y] = 1
    while depth >= 0:
        on_path[stack_v[depth]] = 0
        depth -= 1
    return count


def count_paths(const int64_t[::1] indptr, const int64_t[::1] indices,
                const int64_t[::1] allowed, int64_t stamp, int64_t src,
                int64_t dst, int lo, int hi, int64_t cap):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    on_path = np.zeros(n, dtype=np.uint8)
    stack_v = np.zeros(hi + 1, dtype=np.int64)
    stack_p = np.zeros(hi + 1, dtype=np.int64)
    return int(_count_paths(indptr, indices, allowed, stamp, on_path, stack_v,
                            stack_p, src, dst, lo, hi, cap))


def expand_two_hop(const int64_t[::1] indptr, const int64_t[::1] indices,
                   const int64_t[::1] rank, int64_t k):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    common_arr = np.zeros(max(n, 1), dtype=np.int64)
    best_arr = np.zeros(max(n, 1), dtype=np.int64)
    adj_arr = np.full(max(n, 1), -1, dtype=np.int64)
    touched_arr = np.zeros(max(n, 1), dtype=np.int64)
    cdef int64_t[::1] common = common_arr
    cdef int64_t[::1] best = best_arr
    cdef int64_t[::1] adj = adj_arr
    cdef int64_t[::1] touched = touched_arr
    cdef int64_t v, x, w, rx, p, q, support
    cdef Py_ssize_t nt, t
    cdef int64_t n_candidates = 0
    out_v = []
    out_w = []
    out_c = []
    out_e = []
    for v in range(n):
        nt = 0
        with nogil:
            for p in range(indptr[v], indptr[v + 1]):
                x = indices[p]
                rx = rank[x]
                adj[x] = v
                for q in range(indptr[x], indptr[x + 1]):
                    w = indices[q]
                    if w <= v:
                        continue
                    if common[w] == 0:
                        touched[nt] = w
                        nt += 1
                        common[w] = 1
                        best[w] = x
                    else:
                        common[w] += 1
                        if rx < rank[best[w]]:
                            best[w] = x
        if nt == 0:
            continue
        touched_arr[:nt].sort()
        for t in range(nt):
            w = touched[t]
            if adj[w] != v:
                n_candidates += 1
                support = common[w] - 1
                if support >= k:
                    out_v.append(v)
                    out_w.append(w)
                    out_c.append(min(support, k))
                    out_e.append(best[w])
            common[w] = 0
    return (
        int(n_candidates),
        np.asarray(out_v, dtype=np.int64),
        np.asarray(out_w, dtype=np.int64),
        np.asarray(out_c, dtype=np.int64),
        np.asarray(out_e, dtype=np.int64),
    )


def expand_general(const int64_t[::1] indptr, const int64_t[::1] indices,
                   const int64_t[::1] rank, int lo, int hi, int64_t k):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    allowed_arr = np.zeros(max(n, 1), dtype=np.int64)
    vmark_arr = np.full(max(n, 1), -1, dtype=np.int64)
    on_path_arr = np.zeros(max(n, 1), dtype=np.uint8)
    stack_v_arr = np.zeros(hi + 1, dtype=np.int64)
    stack_p_arr = np.zeros(hi + 1, dtype=np.int64)
    cdef int64_t[::1] allowed = allowed_arr
    cdef int64_t[::1] vmark = vmark_arr
    cdef cnp.uint8_t[::1] on_path = on_path_arr
    cdef int64_t[::1] stack_v = stack_v_arr
    cdef int64_t[::1] stack_p = stack_p_arr
    cdef int64_t e, stamp, re, v, w, x, p, q, a, b, c
    cdef bint owner
    cdef int64_t n_candidates = 0
    out_v = []
    out_w = []
    out_c = []
    out_e = []
    for e in range(n):
        if indptr[e + 1] - indptr[e] < 2:
            continue
        stamp = e + 1
        re = rank[e]
        for p in range(indptr[e], indptr[e + 1]):
            x = indices[p]
            allowed[x] = stamp
            for q in range(indptr[x], indptr[x + 1]):
                allowed[indices[q]] = stamp
        allowed[e] = 0
        for a in range(indptr[e], indptr[e + 1]):
            v = indices[a]
            for q in range(indptr[v], indptr[v + 1]):
                vmark[indices[q]] = v
            for b in range(a + 1, indptr[e + 1]):
                w = indices[b]
                if vmark[w] == v:
                    continue
                owner = True
                for q in range(indptr[w], indptr[w + 1]):
                    x = indices[q]
                    if vmark[x] == v and rank[x] < re:
                        owner = False
                        break
                if not owner:
                    continue
                n_candidates += 1
                c = _count_paths(indptr, indices, allowed, stamp, on_path,
                                 stack_v, stack_p, v, w, lo, hi, k)
                if c >= k:
                    out_v.append(v)
                    out_w.append(w)
                    out_c.append(c)
                    out_e.append(e)
    return (
        int(n_candidates),
        np.asarray(out_v, dtype=np.int64),
        np.asarray(out_w, dtype=np.int64),
        np.asarray(out_c, dtype=np.int64),
        np.asarray(out_e, dtype=np.int64),
    )


cdef inline double _seq_dot(const double[:, ::1] m, Py_ssize_t a, Py_ssize_t b) noexcept nogil:
    cdef Py_ssize_t d
    cdef double acc = 0.0
    for d in range(m.shape[1]):
        acc = acc + m[a, d] * m[b, d]
    return acc


def seq_dot(const double[:, ::1] matrix, Py_ssize_t a, Py_ssize_t b):
    return _seq_dot(matrix, a, b)


def block_top_k(const float[:, ::1] block, const double[:, ::1] matrix, Py_ssize_t start,
                Py_ssize_t k, double margin, int64_t[:, ::1] out_idx, double[:, ::1] out_sim):
    cdef Py_ssize_t rows = block.shape[0], n = block.shape[1]
    cdef Py_ssize_t r, c, p, cnt, me
    cdef double s, thr
    with nogil:
        for r in range(rows):
            me = start + r
            # pass 1: k-th largest approximate similarity
            cnt = 0
            for c in range(n):
                if c == me:
                    continue
                s = block[r, c]
                if cnt < k:
                    p = cnt
                    cnt += 1
                elif s > out_sim[r, k - 1]:
                    p = k - 1
                else:
                    continue
                while p > 0 and out_sim[r, p - 1] < s:
                    out_sim[r, p] = out_sim[r, p - 1]
                    p -= 1
                out_sim[r, p] = s
            thr = out_sim[r, k - 1] - margin
            # pass 2: rank the shortlist by exact sequential dot products;
            # columns arrive ascending, so equal values keep the earlier one
            cnt = 0
            for c in range(n):
                if c == me or block[r, c] < thr:
                    continue
                s = _seq_dot(matrix, me, c)
                if cnt < k:
                    p = cnt
                    cnt += 1
                elif s > out_sim[r, k - 1]:
                    p = k - 1
                else:
                    continue
                while p > 0 and out_sim[r, p - 1] < s:
                    out_sim[r, p] = out_sim[r, p - 1]
                    out_idx[r, p] = out_idx[r, p - 1]
                    p -= 1
                out_sim[r, p] = s
                out_idx[r, p] = c
