"""Word embeddings, synset vectors and exact nearest-neighbor search.

Synset vectors are the unit-normalized mean of the member words' vectors;
similarity between synsets is cosine, i.e. the dot product of unit vectors.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels
from .errors import ParseError

log = logging.getLogger(__name__)

#: rows per matrix block in all-pairs neighbor search
BLOCK = 256


def shortlist_margin(dim):
    """Bound on twice the error of a float32 dot product of unit vectors.

    Single-precision products only shortlist neighbors; every entry within
    this margin of the k-th best is re-scored with a fixed-order float64 dot
    product, so rankings and similarities do not depend on BLAS blocking.
    """
    return 2.0 * (dim + 2) * 2.0 ** -24


@dataclass
class EmbeddingTable:
    words: list
    vectors: np.ndarray
    warnings: int = 0
    _index: dict = field(default=None, repr=False)

    def __post_init__(self):
        self._index = {w: i for i, w in enumerate(self.words)}

    @property
    def dimension(self):
        return self.vectors.shape[1]

    def __len__(self):
        return len(self.words)

    def __contains__(self, word):
        return word in self._index

    def __getitem__(self, word):
        return self.vectors[self._index[word]]

    def get(self, word):
        i = self._index.get(word)
        return None if i is None else self.vectors[i]


def load_embeddings(path):
    """Load a textual ``N D`` header + ``word v1 .. vD`` vector file.

    Duplicate words keep their first vector and are counted in
    :attr:`EmbeddingTable.warnings`.
    """
    with open(path, encoding="utf-8") as fh:
        header = fh.readline()
        parts = header.split()
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise ParseError(path, 1, "missing 'N D' header")
        dim = int(parts[1])
        if dim < 1:
            raise ParseError(path, 1, "dimension must be positive")
        words = []
        rows = []
        seen = set()
        dup = 0
        for lineno, raw in enumerate(fh, 2):
            fields = raw.split()
            if not fields:
                continue
            if len(fields) != dim + 1:
                raise ParseError(path, lineno, f"expected {dim} components, got {len(fields) - 1}")
            word = fields[0]
            try:
                vec = [float(x) for x in fields[1:]]
            except ValueError:
                raise ParseError(path, lineno, "non-numeric component") from None
            if not all(np.isfinite(vec)):
                raise ParseError(path, lineno, "non-finite component")
            if word in seen:
                dup += 1
                continue
            seen.add(word)
            words.append(word)
            rows.append(vec)
    if dup:
        log.warning("%s: %d duplicate word(s) ignored", path, dup)
    vectors = np.asarray(rows, dtype=np.float64).reshape(len(rows), dim)
    return EmbeddingTable(words, vectors, warnings=dup)


def write_embeddings(words, vectors, fh):
    fh.write(f"{len(words)} {vectors.shape[1] if len(vectors.shape) > 1 else 0}\n")
    for w, v in zip(words, vectors):
        fh.write(w + " " + " ".join(f"{x:.6g}" for x in v) + "\n")


def synset_vector(words, table):
    """Unit-normalized mean vector of the in-vocabulary ``words``.

    Returns ``None`` when no word is known or the mean is the zero vector.
    """
    rows = [table.get(w) for w in dict.fromkeys(words)]
    rows = [r for r in rows if r is not None]
    if not rows:
        return None
    mean = np.mean(rows, axis=0)
    norm = np.linalg.norm(mean)
    if norm == 0:
        return None
    return mean / norm


@dataclass
class SynsetVectorIndex:
    """Unit vectors for synsets (by id) plus the ids that had no vector."""

    ids: np.ndarray
    matrix: np.ndarray
    skipped: frozenset = frozenset()
    _pos: dict = field(default=None, repr=False)

    def __post_init__(self):
        self.ids = np.asarray(self.ids, dtype=np.int64)
        self.matrix = np.ascontiguousarray(self.matrix, dtype=np.float64)
        self._pos = {int(s): i for i, s in enumerate(self.ids.tolist())}

    def __len__(self):
        return len(self.ids)

    def __contains__(self, sid):
        return sid in self._pos

    def vector(self, sid):
        return self.matrix[self._pos[sid]]

    @classmethod
    def build(cls, synsets, table):
        """Index ``synsets`` (objects with ``id`` and ``words``) over ``table``."""
        ids, rows, skipped = [], [], set()
        for s in synsets:
            vec = synset_vector(s.words, table)
            if vec is None:
                skipped.add(s.id)
            else:
                ids.append(s.id)
                rows.append(vec)
        dim = table.dimension
        matrix = np.asarray(rows, dtype=np.float64).reshape(len(rows), dim)
        order = np.argsort(ids, kind="stable")
        return cls(np.asarray(ids, dtype=np.int64)[order], matrix[order], frozenset(skipped))

    def knn(self, query, k):
        """``k`` most similar other entries as ``[(id, cosine), ...]``."""
        if query not in self._pos:
            if query in self.skipped:
                raise KeyError(f"synset {query} has no vector")
            raise KeyError(f"unknown synset {query}")
        if k < 1:
            raise ValueError("k must be >= 1")
        row = self._pos[query]
        kk = min(k, len(self.ids) - 1)
        if kk <= 0:
            return []
        nbr = np.zeros((1, kk), dtype=np.int64)
        sim = np.zeros((1, kk), dtype=np.float64)
        m32 = self.matrix.astype(np.float32)
        block = (m32 @ m32[row])[None, :]
        kernels.block_top_k(block, self.matrix, row, kk, shortlist_margin(m32.shape[1]), nbr, sim)
        return [(int(self.ids[c]), s) for c, s in zip(nbr[0].tolist(), sim[0].tolist())]

    def neighbor_lists(self, k):
        """Top-``k`` neighbor positions and similarities for every entry."""
        n = len(self.ids)
        kk = min(k, max(n - 1, 0))
        nbr = np.zeros((n, kk), dtype=np.int64)
        sim = np.zeros((n, kk), dtype=np.float64)
        if kk == 0:
            return nbr, sim
        m32 = self.matrix.astype(np.float32)
        margin = shortlist_margin(m32.shape[1])
        for start in range(0, n, BLOCK):
            block = m32[start:start + BLOCK] @ m32.T
            stop = start + len(block)
            kernels.block_top_k(block, self.matrix, start, kk, margin,
                                nbr[start:stop], sim[start:stop])
        return nbr, sim


def knn(index, query, k):
    return index.knn(query, k)


def mutual_pairs(index, k):
    """Mutual ``k``-nearest-neighbor pairs.

    Returns ``{(a, b): similarity}`` with ``a < b`` synset ids, for every pair
    where each appears in the other's top-``k`` list.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    nbr, sim = index.neighbor_lists(k)
    lists = [set(row.tolist()) for row in nbr]
    out = {}
    for a in range(len(lists)):
        for c, s in zip(nbr[a].tolist(), sim[a].tolist()):
            if c > a and a in lists[c]:
                out[(int(index.ids[a]), int(index.ids[c]))] = float(s)
    return out


def format_mutual_pairs(pairs):
    """``idA<TAB>idB<TAB>similarity`` lines by descending similarity."""
    rows = sorted(pairs.items(), key=lambda kv: (-kv[1], kv[0]))
    return "".join(f"{a}\t{b}\t{s:.6f}\n" for (a, b), s in rows)

