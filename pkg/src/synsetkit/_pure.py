"""Pure-Python kernels.

Reference implementations of the hot loops.  ``_kernels.pyx`` mirrors every
function here with identical semantics (including floating-point summation
order and the PRNG stream), so both backends produce identical results.

Graphs are passed as CSR arrays: ``indptr`` (int64, n + 1), ``indices``
(int64, sorted within each row) and ``weights`` (float64).
"""

import numpy as np

MASK64 = (1 << 64) - 1


def splitmix64(state):
    """Advance a splitmix64 state; return ``(new_state, output)``."""
    state = (state + 0x9E3779B97F4A7C15) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


def chinese_whispers(indptr, indices, weights, node_weights, seed, max_iterations):
    """Run weighted Chinese Whispers label propagation.

    The vote of neighbor ``u`` over edge ``p`` is ``weights[p] * node_weights[u]``.
    Returns ``(labels, sweeps, converged)``.  Labels start as vertex ids; the
    visit order is reshuffled (Fisher-Yates driven by splitmix64) before each
    sweep; ties between top-score labels go to the smallest label.
    """
    indptr = indptr.tolist()
    indices = indices.tolist()
    weights = weights.tolist()
    node_weights = node_weights.tolist()
    n = len(indptr) - 1
    labels = list(range(n))
    order = list(range(n))
    state = seed & MASK64
    sweeps = 0
    converged = False
    while sweeps < max_iterations:
        for i in range(n - 1, 0, -1):
            state, r = splitmix64(state)
            j = r % (i + 1)
            order[i], order[j] = order[j], order[i]
        sweeps += 1
        changed = 0
        for v in order:
            start = indptr[v]
            end = indptr[v + 1]
            if start == end:
                continue
            tally = {}
            for p in range(start, end):
                u = indices[p]
                lab = labels[u]
                tally[lab] = tally.get(lab, 0.0) + weights[p] * node_weights[u]
            best = -1
            best_w = 0.0
            for lab, w in tally.items():
                if best < 0 or w > best_w or (w == best_w and lab < best):
                    best = lab
                    best_w = w
            if best != labels[v]:
                labels[v] = best
                changed += 1
        if changed == 0:
            converged = True
            break
    return np.asarray(labels, dtype=np.int64), sweeps, converged


def induced_neighborhood(indptr, indices, weights, ego):
    """CSR of the subgraph induced by the neighbors of ``ego`` (ego excluded).

    Returns ``(members, local_indptr, local_indices, local_weights)`` where
    ``members`` holds the global ids in ascending order.
    """
    start, end = int(indptr[ego]), int(indptr[ego + 1])
    members = [int(x) for x in indices[start:end]]
    pos = {x: i for i, x in enumerate(members)}
    lptr = [0]
    lind = []
    lw = []
    for x in members:
        for p in range(int(indptr[x]), int(indptr[x + 1])):
            y = int(indices[p])
            i = pos.get(y)
            if i is not None:
                lind.append(i)
                lw.append(float(weights[p]))
        lptr.append(len(lind))
    return (
        np.asarray(members, dtype=np.int64),
        np.asarray(lptr, dtype=np.int64),
        np.asarray(lind, dtype=np.int64),
        np.asarray(lw, dtype=np.float64),
    )


def count_paths(indptr, indices, allowed, stamp, src, dst, lo, hi, cap):
    """Count simple ``src``-``dst`` paths with length in ``[lo, hi]``.

    Intermediate vertices must satisfy ``allowed[x] == stamp``.  The search is
    depth-bounded by ``hi`` and stops once ``cap`` paths are found, so the
    result is ``min(true_count, cap)``.
    """
    on_path = {src}
    count = 0

    def walk(x, depth):
        nonlocal count
        for p in range(indptr[x], indptr[x + 1]):
            y = indices[p]
            if y == dst:
                if lo <= depth + 1 <= hi:
                    count += 1
                    if count >= cap:
                        return True
            elif depth + 1 < hi and allowed[y] == stamp and y not in on_path:
                on_path.add(y)
                done = walk(y, depth + 1)
                on_path.discard(y)
                if done:
                    return True
        return False

    if cap > 0:
        walk(src, 0)
    return count


def _as_lists(indptr, indices):
    return [int(x) for x in indptr], [int(x) for x in indices]


def expand_two_hop(indptr, indices, rank, k):
    """Transitivity expansion specialised to path length exactly 2.

    A length-2 path between ``v`` and ``w`` that avoids the ego is a common
    neighbor other than the ego, so the support of a candidate pair is its
    common-neighbor count minus one, whichever ego proposed it.

    Returns ``(n_candidates, v, w, support, ego)`` for every qualifying pair
    (``v < w``); ``ego`` is the lowest-ranked common neighbor.
    """
    indptr, indices = _as_lists(indptr, indices)
    rank = [int(r) for r in rank]
    n = len(indptr) - 1
    n_candidates = 0
    out_v, out_w, out_c, out_e = [], [], [], []
    for v in range(n):
        common = {}
        best = {}
        for p in range(indptr[v], indptr[v + 1]):
            x = indices[p]
            rx = rank[x]
            for q in range(indptr[x], indptr[x + 1]):
                w = indices[q]
                if w <= v:
                    continue
                if w in common:
                    common[w] += 1
                    if rx < rank[best[w]]:
                        best[w] = x
                else:
                    common[w] = 1
                    best[w] = x
        adjacent = set(indices[indptr[v]:indptr[v + 1]])
        for w in sorted(common):
            if w in adjacent:
                continue
            n_candidates += 1
            support = common[w] - 1
            if support >= k:
                out_v.append(v)
                out_w.append(w)
                out_c.append(min(support, k))
                out_e.append(best[w])
    return (
        n_candidates,
        np.asarray(out_v, dtype=np.int64),
        np.asarray(out_w, dtype=np.int64),
        np.asarray(out_c, dtype=np.int64),
        np.asarray(out_e, dtype=np.int64),
    )


def expand_general(indptr, indices, rank, lo, hi, k):
    """Transitivity expansion for an arbitrary path-length interval.

    Every candidate pair ``(v, w)`` is evaluated once, under the ego with the
    lowest rank among the common neighbors of ``v`` and ``w``.  Paths are
    confined to that ego's second-order network and must avoid the ego.

    Returns the same tuple as :func:`expand_two_hop`.
    """
    indptr, indices = _as_lists(indptr, indices)
    rank = [int(r) for r in rank]
    n = len(indptr) - 1
    allowed = [0] * n
    n_candidates = 0
    out_v, out_w, out_c, out_e = [], [], [], []
    for e in range(n):
        nb = indices[indptr[e]:indptr[e + 1]]
        if len(nb) < 2:
            continue
        stamp = e + 1
        for x in nb:
            allowed[x] = stamp
            for q in range(indptr[x], indptr[x + 1]):
                allowed[indices[q]] = stamp
        allowed[e] = 0
        re = rank[e]
        for a in range(len(nb)):
            v = nb[a]
            nv = set(indices[indptr[v]:indptr[v + 1]])
            for b in range(a + 1, len(nb)):
                w = nb[b]
                if w in nv:
                    continue
                owner = True
                for q in range(indptr[w], indptr[w + 1]):
                    x = indices[q]
                    if x in nv and rank[x] < re:
                        owner = False
                        break
                if not owner:
                    continue
                n_candidates += 1
                c = count_paths(indptr, indices, allowed, stamp, v, w, lo, hi, k)
                if c >= k:
                    out_v.append(v)
                    out_w.append(w)
                    out_c.append(c)
                    out_e.append(e)
    return (
        n_candidates,
        np.asarray(out_v, dtype=np.int64),
        np.asarray(out_w, dtype=np.int64),
        np.asarray(out_c, dtype=np.int64),
        np.asarray(out_e, dtype=np.int64),
    )


def seq_dot(matrix, a, b):
    """Dot product of rows ``a`` and ``b`` summed strictly left to right."""
    acc = 0.0
    for x, y in zip(matrix[a].tolist(), matrix[b].tolist()):
        acc = acc + x * y
    return acc


def block_top_k(block, matrix, start, k, margin, out_idx, out_sim):
    """Top-``k`` columns per row of a similarity block, self excluded.

    Row ``r`` of ``block`` holds approximate (e.g. single-precision)
    similarities of entry ``start + r`` to every entry.  Columns within ``margin`` of the row's
    k-th largest value are re-scored with a sequential dot product over
    ``matrix``; the result is ordered by that exact score, ties by column.
    """
    rows, n = block.shape
    b = np.array(block, dtype=np.float64)
    r = np.arange(rows)
    b[r, start + r] = -np.inf
    kth = np.partition(b, n - k, axis=1)[:, n - k]
    rr, cc = np.nonzero(b >= (kth - margin)[:, None])
    # products summed with a sequential accumulate, matching seq_dot
    exact = np.add.accumulate(matrix[start + rr] * matrix[cc], axis=1)[:, -1]
    order = np.lexsort((cc, -exact, rr))
    rr, cc, exact = rr[order], cc[order], exact[order]
    first = np.searchsorted(rr, r)
    take = (first[:, None] + np.arange(k)[None, :])
    out_idx[:] = cc[take]
    out_sim[:] = exact[take]
