"""Synthetic graphs and benchmarks for testing and timing."""

import numpy as np

from .graph import SynonymyGraph


def power_law_edges(n, m, exponent=2.5, offset=10.0, seed=0):
    """Exactly ``m`` distinct edges over ``n`` vertices, Chung-Lu style.

    Endpoints are drawn with probability proportional to expected degree
    ``(i + offset) ** (-1 / (exponent - 1))``, which gives a power-law degree
    tail; ``offset`` bounds the largest hub.  Returns ``(u, v, w)`` id arrays
    with ``u < v`` and weights uniform in (0, 1].
    """
    if m > n * (n - 1) // 2:
        raise ValueError("too many edges for a simple graph")
    rng = np.random.default_rng(seed)
    p = (np.arange(n) + offset) ** (-1.0 / (exponent - 1.0))
    p /= p.sum()
    keys = np.zeros(0, dtype=np.int64)
    while len(keys) < m:
        need = m - len(keys)
        a = rng.choice(n, size=2 * need + 16, p=p)
        b = rng.choice(n, size=2 * need + 16, p=p)
        keep = a != b
        lo = np.minimum(a[keep], b[keep]).astype(np.int64)
        hi = np.maximum(a[keep], b[keep]).astype(np.int64)
        fresh = np.setdiff1d(np.unique(lo * n + hi), keys, assume_unique=True)
        # take new keys in draw order so the result is independent of batch size
        keys = np.concatenate([keys, rng.permutation(fresh)[:need]])
    keys.sort()
    w = 1.0 - rng.random(m)
    return keys // n, keys % n, w


def word_labels(n):
    return [f"w{i:06d}" for i in range(n)]


def power_law_graph(n, m, exponent=2.5, offset=10.0, seed=0):
    u, v, w = power_law_edges(n, m, exponent, offset, seed)
    labels = word_labels(n)
    return SynonymyGraph.from_edges(
        ((labels[a], labels[b], c) for a, b, c in zip(u.tolist(), v.tolist(), w.tolist())),
        vertices=labels,
    )


def write_power_law_edge_list(path, n, m, exponent=2.5, offset=10.0, seed=0):
    u, v, w = power_law_edges(n, m, exponent, offset, seed)
    labels = word_labels(n)
    with open(path, "w", encoding="utf-8") as fh:
        for a, b, c in zip(u.tolist(), v.tolist(), w.tolist()):
            fh.write(f"{labels[a]}\t{labels[b]}\t{c:.6g}\n")


def random_vectors(words, dim=100, seed=0):
    rng = np.random.default_rng(seed)
    return rng.standard_normal((len(words), dim))


def planted_benchmark(n_synsets=60, size_range=(3, 8), keep=0.35, noise_edges=20,
                      dim=50, spread=0.35, seed=0):
    """Gold synsets, a fragmented synonymy graph, and word vectors.

    Each gold synset is a clique over fresh words from which edges are kept
    with probability ``keep``; ``noise_edges`` random cross-synset edges are
    added.  Word vectors are the synset's random direction plus Gaussian noise
    of scale ``spread``.  Returns ``(gold, edges, words, vectors)``.
    """
    rng = np.random.default_rng(seed)
    gold, words, vecs, edges = [], [], [], []
    for s in range(n_synsets):
        size = int(rng.integers(size_range[0], size_range[1] + 1))
        members = [f"s{s:03d}w{i}" for i in range(size)]
        centre = rng.standard_normal(dim)
        centre /= np.linalg.norm(centre)
        for w in members:
            words.append(w)
            vecs.append(centre + spread * rng.standard_normal(dim) / np.sqrt(dim))
        for a in range(size):
            for b in range(a + 1, size):
                if rng.random() < keep:
                    edges.append((members[a], members[b], float(rng.uniform(0.5, 1.0))))
        gold.append(set(members))
    for _ in range(noise_edges):
        a, b = rng.choice(len(words), size=2, replace=False)
        edges.append((words[a], words[b], float(rng.uniform(0.1, 0.5))))
    return gold, edges, words, np.asarray(vecs)
