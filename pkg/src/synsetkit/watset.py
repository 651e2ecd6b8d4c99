"""Watset meta-clustering.

Words are split into senses by clustering their ego networks (ego removed),
each sense is linked to the best-matching sense of every context word, and
the resulting sense graph is clustered globally into synsets.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import cluster
from ._backend import kernels
from .errors import InconsistentInventoryError, ParseError
from .graph import SynonymyGraph
from .seeds import derive_seed, item_seed

log = logging.getLogger(__name__)

LOCAL_ALGORITHMS = ("cw", "mcl")
GLOBAL_ALGORITHMS = ("cw", "mcl", "maxmax")

# below this many words, process start-up costs more than the local step
PARALLEL_MIN_WORDS = 2000


@dataclass(frozen=True)
class Sense:
    """Sense ``index`` of ``word``; ``context`` maps neighbor words to weights."""

    word: str
    index: int
    context: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def key(self):
        return (self.word, self.index)

    def __str__(self):
        return f"{self.word}#{self.index}"


@dataclass(frozen=True)
class Synset:
    """A set of senses, stored as sorted ``(word, sense_index)`` keys."""

    id: int
    senses: tuple

    def __len__(self):
        return len(self.senses)

    @property
    def words(self):
        """Distinct member words, sorted."""
        return sorted({w for w, _ in self.senses})


@dataclass
class _WordSenses:
    # members: neighbor ids ascending; labels: sense index per member
    members: np.ndarray
    lptr: np.ndarray
    lind: np.ndarray
    lw: np.ndarray
    labels: np.ndarray
    n_senses: int


# -- local step -------------------------------------------------------------


def _cluster_local(lptr, lind, lw, algo, seed, params):
    n = len(lptr) - 1
    if n <= 1:
        return np.zeros(n, dtype=np.int64)
    if algo == "cw":
        return cluster._cw_arrays(lptr, lind, lw, seed, **params).labels
    if algo == "mcl":
        return cluster._mcl_arrays(lptr, lind, lw, **params).labels
    raise ValueError(f"unknown local algorithm {algo!r}; expected one of {LOCAL_ALGORITHMS}")


def _local_senses(indptr, indices, weights, word_id, algo, base_seed, params):
    members, lptr, lind, lw = kernels.induced_neighborhood(indptr, indices, weights, word_id)
    labels = _cluster_local(lptr, lind, lw, algo, item_seed(base_seed, word_id), params)
    n_senses = int(labels.max()) + 1 if len(labels) else 1
    return _WordSenses(members, lptr, lind, lw, labels, n_senses)


def _local_chunk(args):
    indptr, indices, weights, ids, algo, base_seed, params = args
    return [_local_senses(indptr, indices, weights, i, algo, base_seed, params) for i in ids]


def _all_local_senses(g, algo, seed, params, jobs=1):
    base = derive_seed(seed, "watset.local")
    n = len(g)
    if jobs <= 1 or n < PARALLEL_MIN_WORDS:
        return [_local_senses(g.indptr, g.indices, g.weights, i, algo, base, params)
                for i in range(n)]
    chunk = max(1, -(-n // (jobs * 8)))
    tasks = [(g.indptr, g.indices, g.weights, range(s, min(n, s + chunk)), algo, base, params)
             for s in range(0, n, chunk)]
    out = []
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        for part in ex.map(_local_chunk, tasks):
            out.extend(part)
    return out


def _context_of(g, w, ws, index):
    row_w = g.weights[g.indptr[w]:g.indptr[w + 1]]
    ctx = {}
    for a in np.nonzero(ws.labels == index)[0].tolist():
        ctx[g.label(int(ws.members[a]))] = float(row_w[a])
    return ctx


def induce_senses(g, word, local="cw", seed=0, local_params=None):
    """Senses of ``word`` from clustering its neighbors.

    Each cluster of the ego network (ego excluded) becomes one sense whose
    context maps the cluster members to their edge weight with ``word``.  A
    word without neighbors has a single sense with an empty context.
    """
    w = g.index(word)
    ws = _local_senses(g.indptr, g.indices, g.weights, w, local,
                       derive_seed(seed, "watset.local"), dict(local_params or {}))
    return [Sense(word, i, _context_of(g, w, ws, i)) for i in range(ws.n_senses)]


# -- disambiguation ---------------------------------------------------------


def _sense_norms(g, w, ws):
    row = g.weights[g.indptr[w]:g.indptr[w + 1]]
    sq = np.zeros(ws.n_senses)
    if len(ws.labels):
        np.add.at(sq, ws.labels, row * row)
    # the headword itself carries weight 1 in the extended context
    return np.sqrt(1.0 + sq)


def _sense_lookup(ws):
    return dict(zip(ws.members.tolist(), ws.labels.tolist()))


def _disambiguate(g, senses):
    """Sense-graph edges as ``{(sense_id_a, sense_id_b): weight}``.

    Sense ``s`` of ``w`` links, for each context word ``u``, to the sense of
    ``u`` whose extended context (its word plus its context) has the highest
    cosine with the extended context of ``s``.  Ties go to the smallest sense
    index; when every cosine is zero, to the largest context, then smallest
    index.
    """
    n = len(g)
    offsets = np.zeros(n + 1, dtype=np.int64)
    offsets[1:] = np.cumsum([ws.n_senses for ws in senses])
    norms = [_sense_norms(g, w, ws) for w, ws in enumerate(senses)]
    lookups = [_sense_lookup(ws) for ws in senses]
    sizes = [np.bincount(ws.labels, minlength=ws.n_senses) if len(ws.labels)
             else np.zeros(ws.n_senses, dtype=np.int64) for ws in senses]
    # default candidate when only the shared headword overlaps: smallest norm
    base_best = [int(np.argmin(nm)) for nm in norms]
    pairs = {}
    for w in range(n):
        ws = senses[w]
        if not len(ws.members):
            continue
        row_w = g.weights[g.indptr[w]:g.indptr[w + 1]].tolist()
        members = ws.members.tolist()
        labels = ws.labels.tolist()
        lptr = ws.lptr.tolist()
        lind = ws.lind.tolist()
        lw = ws.lw.tolist()
        norm_w = norms[w]
        for a, u in enumerate(members):
            i = labels[a]
            c = row_w[a]
            look_u = lookups[u]
            extra = {}
            # w sits in exactly one context of u, with weight(u, w) == c
            extra[look_u[w]] = c
            for p in range(lptr[a], lptr[a + 1]):
                b = lind[p]
                if labels[b] == i:
                    j = look_u[members[b]]
                    extra[j] = extra.get(j, 0.0) + row_w[b] * lw[p]
            norm_s = norm_w[i]
            norm_u = norms[u]
            best_j = -1
            best_cos = -1.0
            for j in sorted(extra):
                cos = (c + extra[j]) / (norm_s * norm_u[j])
                if cos > best_cos:
                    best_j, best_cos = j, cos
            j0 = base_best[u]
            if j0 not in extra:
                cos = c / (norm_s * norm_u[j0])
                if cos > best_cos or (cos == best_cos and j0 < best_j):
                    best_j, best_cos = j0, cos
            if best_cos <= 0:
                best_j = int(np.argmax(sizes[u]))
            sa = int(offsets[w]) + i
            sb = int(offsets[u]) + best_j
            key = (sa, sb) if sa < sb else (sb, sa)
            pairs[key] = c
    return offsets, pairs


def _sense_graph(g, senses):
    offsets, pairs = _disambiguate(g, senses)
    labels = [(g.label(w), i) for w in range(len(g)) for i in range(senses[w].n_senses)]
    return SynonymyGraph._from_pairs(labels, pairs)


def _inventory_senses(g, inventory):
    by_word = {}
    for s in inventory:
        by_word.setdefault(s.word, []).append(s)
    out = []
    for w, word in enumerate(g.vertices):
        items = sorted(by_word.get(word, ()), key=lambda s: s.index)
        if not items:
            raise InconsistentInventoryError(f"no senses for word {word!r}")
        if [s.index for s in items] != list(range(len(items))):
            raise InconsistentInventoryError(f"sense indices of {word!r} are not contiguous from 0")
        members, lptr, lind, lw = kernels.induced_neighborhood(g.indptr, g.indices, g.weights, w)
        pos = {g.label(int(x)): a for a, x in enumerate(members.tolist())}
        labels = np.full(len(members), -1, dtype=np.int64)
        for s in items:
            for ctx_word in s.context:
                if ctx_word not in g:
                    raise InconsistentInventoryError(
                        f"context word {ctx_word!r} of {s} has no senses in the inventory")
                a = pos.get(ctx_word)
                if a is None:
                    raise InconsistentInventoryError(f"{ctx_word!r} is not a neighbor of {word!r}")
                if labels[a] >= 0:
                    raise InconsistentInventoryError(f"{ctx_word!r} appears in two senses of {word!r}")
                labels[a] = s.index
        if (labels < 0).any():
            missing = g.label(int(members[np.argmax(labels < 0)]))
            raise InconsistentInventoryError(f"neighbor {missing!r} of {word!r} is in no sense context")
        out.append(_WordSenses(members, lptr, lind, lw, labels, len(items)))
    return out


def build_sense_graph(g, inventory):
    """Disambiguated sense graph for a sense inventory covering ``g``.

    Vertices are ``(word, sense_index)`` keys; edge weights are the original
    word-graph weights.
    """
    return _sense_graph(g, _inventory_senses(g, inventory))


# -- global step ------------------------------------------------------------


def _global_clusters(sg, algo, seed, params):
    if algo == "cw":
        return cluster.chinese_whispers(sg, seed=derive_seed(seed, "watset.global"),
                                        **params).clusters()
    if algo == "mcl":
        return cluster.markov_clustering(sg, **params).clusters()
    if algo == "maxmax":
        return [list(c) for c in cluster.maxmax(sg).clusters]
    raise ValueError(f"unknown global algorithm {algo!r}; expected one of {GLOBAL_ALGORITHMS}")


def order_synsets(groups):
    """Assign ids by descending size, ties by smallest member key."""
    groups = [tuple(sorted(g)) for g in groups if g]
    groups.sort(key=lambda s: (-len(s), s[0]))
    return [Synset(i, s) for i, s in enumerate(groups)]


def induce_synsets(g, local="cw", global_="cw", seed=0, jobs=1,
                   local_params=None, global_params=None):
    """Run the full Watset pipeline on ``g`` and return synsets.

    With ``global_="maxmax"`` a sense may belong to several synsets.
    """
    if local not in LOCAL_ALGORITHMS:
        raise ValueError(f"unknown local algorithm {local!r}; expected one of {LOCAL_ALGORITHMS}")
    if global_ not in GLOBAL_ALGORITHMS:
        raise ValueError(f"unknown global algorithm {global_!r}; expected one of {GLOBAL_ALGORITHMS}")
    senses = _all_local_senses(g, local, seed, dict(local_params or {}), jobs)
    sg = _sense_graph(g, senses)
    log.info("sense graph: %d senses, %d edges", len(sg), sg.n_edges)
    groups = _global_clusters(sg, global_, seed, dict(global_params or {}))
    return order_synsets([[sg.label(v) for v in grp] for grp in groups])


# -- serialization ----------------------------------------------------------


def format_synsets(synsets, plain=False):
    """``id<TAB>size<TAB>word#idx, ...`` lines; ``plain`` drops sense suffixes."""
    lines = []
    for s in synsets:
        if plain:
            items = s.words
        else:
            items = [f"{w}#{i}" for w, i in sorted(s.senses)]
        lines.append(f"{s.id}\t{len(items)}\t{', '.join(items)}\n")
    return "".join(lines)


def parse_sense_token(token):
    word, sep, idx = token.rpartition("#")
    if sep and idx.isdigit():
        return word, int(idx)
    return token, 0


def read_synsets(path):
    """Read a synset file written by :func:`format_synsets` (either mode)."""
    synsets = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ParseError(path, lineno, "expected id<TAB>size<TAB>members")
            try:
                sid = int(parts[0])
            except ValueError:
                raise ParseError(path, lineno, f"bad synset id {parts[0]!r}") from None
            tokens = [t for t in parts[2].split(", ") if t]
            if not tokens:
                raise ParseError(path, lineno, "empty synset")
            synsets.append(Synset(sid, tuple(sorted(parse_sense_token(t) for t in tokens))))
    return synsets


def synset_word_sets(synsets):
    return [set(s.words) for s in synsets]


def sense_count(synsets):
    return sum(len(s) for s in synsets)
