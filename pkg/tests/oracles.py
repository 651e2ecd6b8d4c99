"""Independent reference implementations used only by the tests.

They are deliberately naive (exhaustive enumeration, dense matrices, full
sorts) and share no code with the package.
"""

from itertools import combinations

import numpy as np


def brute_prf(predicted, gold):
    """Paired P/R/F by enumerating every word pair of the shared lexicon."""
    pw = set().union(*predicted) if predicted else set()
    gw = set().union(*gold) if gold else set()
    lex = sorted(pw & gw)
    pp = pg = tp = 0
    for a, b in combinations(lex, 2):
        in_p = any(a in c and b in c for c in predicted)
        in_g = any(a in c and b in c for c in gold)
        pp += in_p
        pg += in_g
        tp += in_p and in_g
    p = tp / pp if pp else 0.0
    r = tp / pg if pg else 0.0
    f = 2 * p * r / (p + r) if p + r else 0.0
    return p, r, f, tp, pp, pg, len(lex)


def all_simple_paths(adj, src, dst, banned=()):
    """Every simple path src..dst as a tuple of vertices (exhaustive DFS)."""
    out = []
    banned = set(banned)

    def walk(path):
        x = path[-1]
        if x == dst:
            out.append(tuple(path))
            return
        for y in adj[x]:
            if y not in path and y not in banned:
                walk(path + [y])

    if src not in banned:
        walk([src])
    return out


def dense_mcl(a, expansion=2, inflation=2.0, epsilon=1e-5, max_iterations=100):
    """Textbook MCL on a small dense adjacency matrix; returns clusters."""
    m = np.array(a, dtype=float) + np.eye(len(a))
    m = m / m.sum(axis=0)
    for _ in range(max_iterations):
        prev = m
        m = np.linalg.matrix_power(m, expansion)
        m = m ** inflation
        m = m / m.sum(axis=0)
        if np.abs(m - prev).max() < epsilon:
            break
    clusters = set()
    for r in range(len(m)):
        if m[r, r] > 1e-9:
            clusters.add(frozenset(np.nonzero(m[r] > 1e-9)[0].tolist()))
    return clusters


def cosine(a, b):
    """Dot product of unit vectors, summed left to right in plain Python."""
    acc = 0.0
    for x, y in zip(a, b):
        acc = acc + x * y
    return acc


def brute_knn(vectors, ids, q, k):
    """Exhaustive kNN by full sort of (-cosine, id)."""
    vs = {i: (np.asarray(v, float) / np.linalg.norm(v)).tolist() for i, v in zip(ids, vectors)}
    scored = sorted((-cosine(vs[q], vs[o]), o) for o in ids if o != q)
    return [(o, -s) for s, o in scored[:k]]


def components(n, edges):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        parent[find(a)] = find(b)
    return [find(x) for x in range(n)]
