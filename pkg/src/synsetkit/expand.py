"""Synonymy graph expansion through relation transitivity.

Two neighbors ``v`` and ``w`` of an ego that are not linked themselves get an
edge when at least ``k`` simple paths of length in ``[i, j]`` connect them
inside the ego's second-order network without passing through the ego.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExpansionParams:
    k: int = 5
    i: int = 2
    j: int = 2

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.i < 2:
            raise ValueError(f"i must be >= 2, got {self.i}")
        if self.j < self.i:
            raise ValueError(f"j must be >= i, got i={self.i}, j={self.j}")

    @property
    def tag(self):
        return f"k{self.k}-i{self.i}-j{self.j}"


@dataclass
class ExpansionReport:
    edges_added: int = 0
    candidates_considered: int = 0
    per_ego: dict = field(default_factory=dict)

    def format(self):
        lines = [f"{ego}\t{n}\n" for ego, n in sorted(self.per_ego.items())]
        lines.append(
            f"# edges_added={self.edges_added} "
            f"candidates_considered={self.candidates_considered}\n"
        )
        return "".join(lines)


def candidate_edges(g, ego):
    """Unlinked pairs of neighbors of ``ego``, as ``frozenset`` word pairs."""
    e = g.index(ego)
    nb = g.neighbor_ids(e).tolist()
    out = set()
    for a in range(len(nb)):
        row = set(g.neighbor_ids(nb[a]).tolist())
        for b in range(a + 1, len(nb)):
            if nb[b] not in row:
                out.add(frozenset((g.label(nb[a]), g.label(nb[b]))))
    return out


def count_paths_bounded(n2, v, w, ego, params):
    """Simple ``v``-``w`` paths in ``n2`` avoiding ``ego``, saturating at ``k``.

    ``n2`` is an :class:`~synsetkit.graph.EgoNetwork` (normally of order 2);
    only paths with length in ``[params.i, params.j]`` are counted.
    """
    sg = n2.subgraph
    a, b, e = sg.index(v), sg.index(w), sg.index(ego)
    if a == b:
        raise ValueError("v and w must differ")
    allowed = np.ones(len(sg), dtype=np.int64)
    allowed[e] = 0
    return int(kernels.count_paths(sg.indptr, sg.indices, allowed, 1, a, b,
                                   params.i, params.j, params.k))


def surface_rank(g):
    """Rank of every vertex id in lexicographic order of labels."""
    order = sorted(range(len(g)), key=g.label)
    rank = np.empty(len(g), dtype=np.int64)
    rank[order] = np.arange(len(g))
    return rank


def qualifying_pairs(g, params, fast_path=True):
    """Candidate count and qualifying ``(v, w, support, ego)`` id arrays.

    Each candidate pair is evaluated once, under the lexicographically
    smallest ego that proposes it.
    """
    rank = surface_rank(g)
    if fast_path and params.i == params.j == 2:
        return kernels.expand_two_hop(g.indptr, g.indices, rank, params.k)
    return kernels.expand_general(g.indptr, g.indices, rank, params.i, params.j, params.k)


def expand_graph(g, params, inserted_weight=1.0, fast_path=True):
    """Add every qualifying candidate edge of ``g``; return ``(graph, report)``.

    All candidates are judged against the input graph only, so the result does
    not depend on evaluation order.  Inserted edges get ``inserted_weight``.
    """
    n_candidates, vs, ws, _, egos = qualifying_pairs(g, params, fast_path)
    new = {(int(v), int(w)): inserted_weight for v, w in zip(vs.tolist(), ws.tolist())}
    per_ego = Counter(g.label(int(e)) for e in egos.tolist())
    report = ExpansionReport(
        edges_added=len(new),
        candidates_considered=int(n_candidates),
        per_ego=dict(per_ego),
    )
    log.info("expansion %s: %d of %d candidates added", params.tag, len(new), n_candidates)
    return g.with_edges(new), report


__all__ = [
    "ExpansionParams",
    "ExpansionReport",
    "candidate_edges",
    "count_paths_bounded",
    "expand_graph",
]
