"""Graph clustering: Chinese Whispers, Markov Clustering and MaxMax.

All algorithms work on vertex ids of a :class:`~synsetkit.graph.SynonymyGraph`
and are deterministic for fixed parameters (and seed, for Chinese Whispers).
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ._backend import kernels

CW_WEIGHTINGS = ("top", "log", "nolog")


@dataclass(frozen=True, eq=False)
class Partition:
    """Hard clustering: ``labels[v]`` is the cluster id of vertex ``v``.

    Ids are canonical: contiguous from 0 in order of first appearance over
    ascending vertex ids.
    """

    labels: np.ndarray
    converged: bool = True
    iterations: int = 0

    @classmethod
    def from_labels(cls, labels, **kw):
        return cls(canonicalize(labels), **kw)

    def __len__(self):
        return len(self.labels)

    @property
    def n_clusters(self):
        return int(self.labels.max()) + 1 if len(self.labels) else 0

    def clusters(self):
        """Member vertex ids per cluster, in cluster-id order."""
        groups = [[] for _ in range(self.n_clusters)]
        for v, c in enumerate(self.labels.tolist()):
            groups[c].append(v)
        return groups

    def __eq__(self, other):
        return isinstance(other, Partition) and np.array_equal(self.labels, other.labels)

    __hash__ = None


@dataclass(frozen=True)
class FuzzyClustering:
    """Overlapping clusters as sorted tuples of vertex ids."""

    clusters: tuple

    def __len__(self):
        return len(self.clusters)


def canonicalize(labels):
    """Relabel clusters 0, 1, ... by first appearance over vertex ids."""
    labels = np.asarray(labels, dtype=np.int64)
    if not len(labels):
        return labels.copy()
    _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(len(first))
    return rank[inverse.reshape(-1)]


def _vote_weights(indptr, weighting):
    deg = np.diff(indptr).astype(np.float64)
    if weighting == "top":
        return np.ones(len(deg))
    deg[deg == 0] = 1.0
    if weighting == "log":
        return 1.0 / np.log1p(deg)
    if weighting == "nolog":
        return 1.0 / deg
    raise ValueError(f"unknown weighting {weighting!r}; expected one of {CW_WEIGHTINGS}")


def chinese_whispers(g, seed=0, max_iterations=20, weighting="log"):
    """Chinese Whispers label propagation.

    Each vertex repeatedly adopts the label with the highest vote among its
    neighbors.  A neighbor ``u`` votes with ``weight(v, u) * f(deg(u))`` where
    ``f`` is 1 (``"top"``), ``1 / log(1 + deg)`` (``"log"``) or ``1 / deg``
    (``"nolog"``).  Stops at a fixed point or after ``max_iterations`` sweeps.
    """
    if max_iterations < 1:
        raise ValueError("max_iterations must be >= 1")
    return _cw_arrays(g.indptr, g.indices, g.weights, seed, max_iterations, weighting)


def _cw_arrays(indptr, indices, weights, seed, max_iterations=20, weighting="log"):
    nw = _vote_weights(indptr, weighting)
    labels, sweeps, converged = kernels.chinese_whispers(
        indptr, indices, weights, nw, int(seed), int(max_iterations)
    )
    return Partition.from_labels(labels, converged=converged, iterations=sweeps)


def cw_vote_scores(g, labels, v, weighting="log"):
    """Per-label vote totals at vertex ``v`` (used to check fixed points)."""
    nw = _vote_weights(g.indptr, weighting)
    scores = {}
    for p in range(g.indptr[v], g.indptr[v + 1]):
        u = g.indices[p]
        lab = int(labels[u])
        scores[lab] = scores.get(lab, 0.0) + g.weights[p] * nw[u]
    return scores


# -- Markov Clustering ------------------------------------------------------

DENSE_LIMIT = 300


def _flow_matrix(indptr, indices, weights, n, dense):
    a = sp.csr_matrix((weights, indices, indptr), shape=(n, n))
    a = a + sp.identity(n, format="csr")
    if dense:
        m = a.toarray()
        return m / m.sum(axis=0, keepdims=True)
    m = a.tocsc()
    return _normalize_sparse(m)


def _normalize_sparse(m):
    sums = np.asarray(m.sum(axis=0)).ravel()
    sums[sums == 0] = 1.0
    return (m @ sp.diags(1.0 / sums)).tocsc()


def _prune(m, threshold, dense):
    # never prune a column's maximum, so no column empties out
    if dense:
        keep = (m >= threshold) | (m == m.max(axis=0, keepdims=True))
        m = np.where(keep, m, 0.0)
        return m / m.sum(axis=0, keepdims=True)
    colmax = np.asarray(m.max(axis=0).todense()).ravel()
    cols = np.repeat(np.arange(m.shape[1]), np.diff(m.indptr))
    drop = (m.data < threshold) & (m.data < colmax[cols])
    if drop.any():
        m = m.copy()
        m.data[drop] = 0.0
        m.eliminate_zeros()
    return _normalize_sparse(m)


def _mcl_step(m, expansion, inflation, prune, dense):
    e = m
    for _ in range(expansion - 1):
        e = e @ m
    if dense:
        e = np.power(e, inflation)
        e = e / e.sum(axis=0, keepdims=True)
    else:
        e = _normalize_sparse(e.tocsc().power(inflation))
    return _prune(e, prune, dense)


def _max_abs_diff(a, b, dense):
    if dense:
        return float(np.abs(a - b).max())
    d = (a - b).tocsc()
    return float(np.abs(d.data).max()) if d.nnz else 0.0


def _extract(m, dense):
    """Assign each vertex to its strongest attractor; merge attractor systems."""
    n = m.shape[0]
    if dense:
        diag = np.diag(m)
        cols = [(np.nonzero(m[:, v])[0], m[:, v][np.nonzero(m[:, v])[0]]) for v in range(n)]
    else:
        m = m.tocsc()
        m.sort_indices()
        diag = m.diagonal()
        cols = [
            (m.indices[m.indptr[v]:m.indptr[v + 1]], m.data[m.indptr[v]:m.indptr[v + 1]])
            for v in range(n)
        ]
    attractor = diag > 0
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for v, (rows, vals) in enumerate(cols):
        mask = attractor[rows]
        if mask.any():
            rows, vals = rows[mask], vals[mask]
        if not len(rows):
            continue
        # rows ascend, so argmax picks the smallest id among ties
        target = int(rows[int(np.argmax(vals))])
        a, b = find(v), find(target)
        if a != b:
            parent[max(a, b)] = min(a, b)
    return np.array([find(v) for v in range(n)], dtype=np.int64)


def markov_clustering(
    g,
    expansion=2,
    inflation=2.0,
    epsilon=1e-5,
    max_iterations=100,
    prune=1e-5,
    on_iteration=None,
):
    """Markov Clustering over the flow matrix of ``g`` with unit self-loops.

    Alternates expansion (matrix power) and inflation (entrywise power, column
    renormalization, pruning of entries below ``prune``) until the largest
    absolute entry change drops below ``epsilon``.  ``on_iteration`` receives
    the column-stochastic matrix after every normalization step.

    Returns a :class:`Partition`; ``converged`` is False when
    ``max_iterations`` was reached first.
    """
    return _mcl_arrays(g.indptr, g.indices, g.weights, expansion, inflation,
                       epsilon, max_iterations, prune, on_iteration)


def _mcl_arrays(indptr, indices, weights, expansion=2, inflation=2.0, epsilon=1e-5,
                max_iterations=100, prune=1e-5, on_iteration=None):
    if expansion < 2:
        raise ValueError("expansion must be >= 2")
    if not inflation > 1:
        raise ValueError("inflation must be > 1")
    if not epsilon > 0:
        raise ValueError("epsilon must be > 0")
    n = len(indptr) - 1
    if n == 0:
        return Partition(np.zeros(0, dtype=np.int64))
    dense = n <= DENSE_LIMIT
    m = _flow_matrix(indptr, indices, weights, n, dense)
    if on_iteration is not None:
        on_iteration(m)
    converged = False
    it = 0
    while it < max_iterations:
        it += 1
        nxt = _mcl_step(m, expansion, inflation, prune, dense)
        if on_iteration is not None:
            on_iteration(nxt)
        delta = _max_abs_diff(nxt, m, dense)
        m = nxt
        if delta < epsilon:
            converged = True
            break
    return Partition.from_labels(_extract(m, dense), converged=converged, iterations=it)


# -- MaxMax -----------------------------------------------------------------


def maxmax(g):
    """MaxMax fuzzy clustering.

    Builds a directed graph with an arc ``v -> u`` whenever ``v`` is one of the
    maximal-weight neighbors of ``u`` (ties all kept), then, for roots in
    ascending id order, forms a cluster of the root and everything reachable
    from it, demoting every reached vertex from root status.
    """
    n = len(g)
    children = [[] for _ in range(n)]
    for u in range(n):
        s, e = g.indptr[u], g.indptr[u + 1]
        if s == e:
            continue
        w = g.weights[s:e]
        for v in g.indices[s:e][w == w.max()].tolist():
            children[v].append(u)
    root = [True] * n
    clusters = []
    for r in range(n):
        if not root[r]:
            continue
        seen = {r}
        stack = [r]
        while stack:
            x = stack.pop()
            for y in children[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        for x in seen:
            if x != r:
                root[x] = False
        clusters.append(tuple(sorted(seen)))
    return FuzzyClustering(tuple(clusters))


ALGORITHMS = ("cw", "mcl", "maxmax")


def clusters_as_labels(g, groups):
    """Map clusters of vertex ids to clusters of vertex labels."""
    return [[g.label(v) for v in grp] for grp in groups]


def format_clusters(groups):
    """Render ``id<TAB>size<TAB>w1, w2, ...`` lines, members sorted."""
    lines = []
    for cid, grp in enumerate(groups):
        items = sorted(str(x) for x in grp)
        lines.append(f"{cid}\t{len(items)}\t{', '.join(items)}\n")
    return "".join(lines)

