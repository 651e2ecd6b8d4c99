"""Undirected weighted synonymy graphs.

Vertices are arbitrary hashable labels (words for synonymy graphs, sense keys
for sense graphs) mapped to dense integer ids in first-appearance order.  The
adjacency is stored in CSR form with rows sorted by neighbor id, which is the
layout the kernels consume directly.
"""

import logging
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import EmptyGraphError, ParseError, UnknownVertexError
from .io import atomic_write_text

log = logging.getLogger(__name__)


class SynonymyGraph:
    """Immutable, simple, undirected graph with positive edge weights.

    Build instances with :meth:`from_edges` or :func:`load_edge_list`.
    """

    __slots__ = ("_vertices", "_index", "indptr", "indices", "weights", "warnings")

    def __init__(self, vertices, indptr, indices, weights, warnings=0):
        self._vertices = tuple(vertices)
        self._index = {v: i for i, v in enumerate(self._vertices)}
        if len(self._index) != len(self._vertices):
            raise ValueError("duplicate vertex labels")
        self.indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        self.indices = np.ascontiguousarray(indices, dtype=np.int64)
        self.weights = np.ascontiguousarray(weights, dtype=np.float64)
        for arr in (self.indptr, self.indices, self.weights):
            arr.flags.writeable = False
        #: number of input records dropped or merged during construction
        self.warnings = warnings

    @classmethod
    def from_edges(cls, edges, vertices=()):
        """Build a graph from ``(u, v)`` or ``(u, v, weight)`` records.

        Duplicate pairs keep the maximum weight; self-loops are dropped and
        counted in :attr:`warnings`.  Vertices of dropped self-loops and every
        label in ``vertices`` are still materialized.
        """
        index = {}
        for v in vertices:
            index.setdefault(v, len(index))
        best = {}
        dropped = 0
        for rec in edges:
            u, v = rec[0], rec[1]
            w = float(rec[2]) if len(rec) > 2 else 1.0
            if not w > 0 or not math.isfinite(w):
                raise ValueError(f"edge weight must be positive and finite: {rec!r}")
            a = index.setdefault(u, len(index))
            b = index.setdefault(v, len(index))
            if a == b:
                dropped += 1
                continue
            key = (a, b) if a < b else (b, a)
            old = best.get(key)
            if old is None or w > old:
                best[key] = w
        if dropped:
            log.warning("dropped %d self-loop(s)", dropped)
        labels = sorted(index, key=index.__getitem__)
        return cls._from_pairs(labels, best, warnings=dropped)

    @classmethod
    def _from_pairs(cls, labels, pairs, warnings=0):
        n = len(labels)
        m = len(pairs)
        src = np.empty(2 * m, dtype=np.int64)
        dst = np.empty(2 * m, dtype=np.int64)
        wts = np.empty(2 * m, dtype=np.float64)
        if m:
            ab = np.fromiter((x for key in pairs for x in key), dtype=np.int64, count=2 * m)
            ww = np.fromiter(pairs.values(), dtype=np.float64, count=m)
            src[:m], dst[:m] = ab[0::2], ab[1::2]
            src[m:], dst[m:] = ab[1::2], ab[0::2]
            wts[:m] = ww
            wts[m:] = ww
        order = np.lexsort((dst, src))
        src, dst, wts = src[order], dst[order], wts[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        return cls(labels, indptr, dst, wts, warnings=warnings)

    # -- basic queries -----------------------------------------------------

    @property
    def vertices(self):
        """Vertex labels in id order."""
        return self._vertices

    def __len__(self):
        return len(self._vertices)

    def __contains__(self, label):
        return label in self._index

    def __repr__(self):
        return f"<SynonymyGraph |V|={len(self)} |E|={self.n_edges}>"

    @property
    def n_edges(self):
        return len(self.indices) // 2

    def index(self, label):
        """Integer id of ``label``."""
        try:
            return self._index[label]
        except KeyError:
            raise UnknownVertexError(label) from None

    def label(self, i):
        return self._vertices[i]

    def degree(self, label):
        i = self.index(label)
        return int(self.indptr[i + 1] - self.indptr[i])

    def neighbor_ids(self, i):
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def neighbors(self, label):
        """Mapping neighbor label -> edge weight."""
        i = self.index(label)
        s, e = self.indptr[i], self.indptr[i + 1]
        return {
            self._vertices[j]: float(w)
            for j, w in zip(self.indices[s:e].tolist(), self.weights[s:e].tolist())
        }

    def weight(self, u, v):
        """Weight of edge ``(u, v)``, or ``None`` if absent."""
        a, b = self.index(u), self.index(v)
        row = self.neighbor_ids(a)
        pos = int(np.searchsorted(row, b))
        if pos < len(row) and row[pos] == b:
            return float(self.weights[self.indptr[a] + pos])
        return None

    def has_edge(self, u, v):
        return self.weight(u, v) is not None

    def edge_ids(self):
        """Arrays ``(u, v, w)`` of edges with ``u < v`` in CSR order."""
        src = np.repeat(np.arange(len(self), dtype=np.int64), np.diff(self.indptr))
        mask = src < self.indices
        return src[mask], self.indices[mask], self.weights[mask]

    def edges(self):
        """Iterate ``(u, v, weight)`` label triples, each edge once."""
        us, vs, ws = self.edge_ids()
        labels = self._vertices
        for a, b, w in zip(us.tolist(), vs.tolist(), ws.tolist()):
            yield labels[a], labels[b], w

    def edge_set(self):
        """Edges as a set of ``frozenset`` pairs."""
        return {frozenset((u, v)) for u, v, _ in self.edges()}

    def subgraph(self, labels):
        """Induced subgraph; vertices keep their relative id order."""
        keep = sorted({self.index(v) for v in labels})
        return self._induced(keep)

    def _induced(self, ids):
        ids = np.asarray(ids, dtype=np.int64)
        local = np.full(len(self), -1, dtype=np.int64)
        local[ids] = np.arange(len(ids))
        pairs = {}
        for a in ids.tolist():
            s, e = self.indptr[a], self.indptr[a + 1]
            for b, w in zip(self.indices[s:e].tolist(), self.weights[s:e].tolist()):
                if a < b and local[b] >= 0:
                    pairs[(int(local[a]), int(local[b]))] = w
        return SynonymyGraph._from_pairs([self._vertices[i] for i in ids.tolist()], pairs)

    def with_edges(self, new_pairs):
        """Copy of the graph with extra ``(u_id, v_id) -> weight`` edges."""
        us, vs, ws = self.edge_ids()
        pairs = dict(zip(zip(us.tolist(), vs.tolist()), ws.tolist()))
        for (a, b), w in new_pairs.items():
            key = (a, b) if a < b else (b, a)
            pairs.setdefault(key, w)
        return SynonymyGraph._from_pairs(list(self._vertices), pairs)


@dataclass(frozen=True)
class EgoNetwork:
    ego: object
    order: int
    subgraph: SynonymyGraph


def ego_network(g, ego, order=1):
    """Induced ego network of ``ego`` of order 1 or 2."""
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    e = g.index(ego)
    members = {e}
    frontier = [e]
    for _ in range(order):
        nxt = []
        for x in frontier:
            for y in g.neighbor_ids(x).tolist():
                if y not in members:
                    members.add(y)
                    nxt.append(y)
        frontier = nxt
    return EgoNetwork(ego, order, g._induced(sorted(members)))


@dataclass(frozen=True)
class GraphStats:
    vertices: int
    edges: int
    weight_sum: float
    degree_histogram: dict

    def format(self):
        hist = ", ".join(f"{d}:{c}" for d, c in sorted(self.degree_histogram.items()))
        return (
            f"vertices\t{self.vertices}\n"
            f"edges\t{self.edges}\n"
            f"weight_sum\t{self.weight_sum:.6g}\n"
            f"degree_histogram\t{hist}\n"
        )


def graph_stats(g):
    degrees = np.diff(g.indptr)
    _, _, ws = g.edge_ids()
    return GraphStats(
        vertices=len(g),
        edges=g.n_edges,
        weight_sum=float(ws.sum()) if len(ws) else 0.0,
        degree_histogram=dict(Counter(degrees.tolist())),
    )


def _parse_edge_line(path, lineno, line):
    fields = line.split("\t")
    if len(fields) not in (2, 3):
        raise ParseError(path, lineno, f"expected 2 or 3 tab-separated fields, got {len(fields)}")
    u, v = fields[0], fields[1]
    if not u.strip() or not v.strip():
        raise ParseError(path, lineno, "empty word")
    if len(fields) == 3:
        try:
            w = float(fields[2])
        except ValueError:
            raise ParseError(path, lineno, f"non-numeric weight {fields[2]!r}") from None
        if not (w > 0 and math.isfinite(w)):
            raise ParseError(path, lineno, f"weight must be positive, got {fields[2]!r}")
    else:
        w = 1.0
    return u, v, w


def read_edge_records(path):
    """Yield ``(word1, word2, weight)`` from an edge-list file."""
    seen_data = False
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            seen_data = True
            yield _parse_edge_line(path, lineno, line)
    if not seen_data:
        raise EmptyGraphError(f"{path}: no edges found")


def load_edge_list(path):
    """Load a ``word1<TAB>word2[<TAB>weight]`` file into a graph."""
    return SynonymyGraph.from_edges(read_edge_records(path))


def format_weight(w):
    return f"{w:.6g}"


def write_edge_list(g, path_or_file):
    """Write edges sorted by ``(word1, word2)``, ``word1 < word2``."""
    rows = []
    for u, v, w in g.edges():
        if v < u:
            u, v = v, u
        rows.append((u, v, w))
    rows.sort()
    text = "".join(f"{u}\t{v}\t{format_weight(w)}\n" for u, v, w in rows)
    if hasattr(path_or_file, "write"):
        path_or_file.write(text)
    else:
        atomic_write_text(path_or_file, text)
