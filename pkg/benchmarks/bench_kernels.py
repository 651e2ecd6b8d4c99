"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--vertices 3000] [--repeat 3]

Both backends run on identical inputs and the last column reports whether
their outputs are equal.
"""

import argparse
import time

import numpy as np

from synsetkit import _pure
from synsetkit.cluster import _vote_weights
from synsetkit.embed import shortlist_margin
from synsetkit.expand import surface_rank
from synsetkit.synthetic import power_law_graph

try:
    from synsetkit import _kernels
except ImportError:
    _kernels = None


def best_of(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def same(a, b):
    if isinstance(a, tuple):
        return len(a) == len(b) and all(same(x, y) for x, y in zip(a, b))
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        return np.array_equal(np.asarray(a), np.asarray(b))
    return a == b


def cases(n, seed):
    g = power_law_graph(n, 3 * n, seed=seed)
    ip, ix, w = g.indptr, g.indices, g.weights
    nw = _vote_weights(ip, "log")
    rank = surface_rank(g)
    hub = int(np.argmax(np.diff(ip)))
    allowed = np.ones(len(g), dtype=np.int64)
    allowed[hub] = 0
    nb = ix[ip[hub]:ip[hub + 1]]
    src, dst = int(nb[0]), int(nb[-1])

    rng = np.random.default_rng(seed)
    m = rng.standard_normal((2048, 100))
    m /= np.linalg.norm(m, axis=1, keepdims=True)
    m32 = m.astype(np.float32)
    block = m32[:256] @ m32.T
    margin = shortlist_margin(100)

    def top_k(mod):
        idx = np.zeros((256, 10), dtype=np.int64)
        sim = np.zeros((256, 10))
        mod.block_top_k(block, m, 0, 10, margin, idx, sim)
        return idx, sim

    return [
        ("chinese_whispers", lambda k: k.chinese_whispers(ip, ix, w, nw, 7, 20)),
        ("expand_two_hop", lambda k: k.expand_two_hop(ip, ix, rank, 5)),
        ("expand_general 2..3", lambda k: k.expand_general(ip, ix, rank, 2, 3, 5)),
        ("count_paths 2..4", lambda k: k.count_paths(ip, ix, allowed, 1, src, dst, 2, 4, 10**6)),
        ("block_top_k 256x2048", top_k),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--vertices", type=int, default=3000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if _kernels is None:
        raise SystemExit("compiled extension not built; run: pip install -e . --no-build-isolation")

    print(f"{'kernel':<24}{'pure (s)':>12}{'compiled (s)':>14}{'speedup':>10}  equal")
    for name, fn in cases(args.vertices, args.seed):
        tp, out_p = best_of(lambda: fn(_pure), args.repeat)
        tc, out_c = best_of(lambda: fn(_kernels), args.repeat)
        print(f"{name:<24}{tp:>12.4f}{tc:>14.4f}{tp / max(tc, 1e-9):>9.1f}x  {same(out_p, out_c)}")


if __name__ == "__main__":
    main()
