import io
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from synsetkit import embed
from synsetkit.embed import (
    EmbeddingTable,
    SynsetVectorIndex,
    format_mutual_pairs,
    knn,
    load_embeddings,
    mutual_pairs,
    synset_vector,
    write_embeddings,
)
from synsetkit.errors import ParseError
from synsetkit.watset import Synset

from oracles import brute_knn


def table(d):
    words = list(d)
    return EmbeddingTable(words, np.array([d[w] for w in words], dtype=float))


def syn(i, *words):
    return Synset(i, tuple((w, 0) for w in sorted(words)))


def test_load_basic(tmp_path):
    p = tmp_path / "v.txt"
    p.write_text("2 3\na 1 0 0\nb 0 1 0\n")
    t = load_embeddings(p)
    assert t.words == ["a", "b"] and t.dimension == 3
    assert t["b"].tolist() == [0, 1, 0]


def test_load_duplicate_keeps_first(tmp_path):
    p = tmp_path / "v.txt"
    p.write_text("3 2\na 1 0\nb 0 1\na 5 5\n")
    t = load_embeddings(p)
    assert len(t) == 2 and t.warnings == 1
    assert t["a"].tolist() == [1, 0]


@pytest.mark.parametrize("text, lineno", [
    ("2 3\na 1 0 0\nb 0 1\n", 3),
    ("a 1 0 0\n", 1),
    ("1 2\na 1 x\n", 2),
    ("1 2\na 1 inf\n", 2),
])
def test_load_errors(tmp_path, text, lineno):
    p = tmp_path / "v.txt"
    p.write_text(text)
    with pytest.raises(ParseError) as err:
        load_embeddings(p)
    assert err.value.lineno == lineno


def test_write_round_trip(tmp_path):
    buf = io.StringIO()
    write_embeddings(["a", "b"], np.array([[0.5, 1.0], [2.0, -0.25]]), buf)
    p = tmp_path / "v.txt"
    p.write_text(buf.getvalue())
    t = load_embeddings(p)
    assert t.words == ["a", "b"] and t["b"].tolist() == [2.0, -0.25]


def test_synset_vector_examples():
    t = table({"w": [3.0, 4.0], "w1": [1.0, 0.0], "w2": [0.0, 1.0]})
    assert np.allclose(synset_vector(["w"], t), [0.6, 0.8])
    h = math.sqrt(2) / 2
    assert np.allclose(synset_vector(["w1", "w2"], t), [h, h])
    assert np.allclose(synset_vector(["w1", "oov"], t), [1.0, 0.0])
    assert synset_vector(["oov"], t) is None
    zero = table({"p": [1.0, 0.0], "q": [-1.0, 0.0]})
    assert synset_vector(["p", "q"], zero) is None


def three_vectors():
    t = table({"x": [1.0, 0.0], "y": [0.9, 0.1], "z": [0.0, 1.0]})
    return SynsetVectorIndex.build([syn(1, "x"), syn(2, "y"), syn(3, "z")], t)


def test_knn_and_mutual_examples():
    idx = three_vectors()
    assert [i for i, _ in knn(idx, 1, 1)] == [2]
    sim = knn(idx, 1, 1)[0][1]
    assert sim == pytest.approx(0.9 / math.hypot(0.9, 0.1))
    assert mutual_pairs(idx, 1) == {(1, 2): pytest.approx(sim)}
    assert set(mutual_pairs(idx, 2)) == {(1, 2), (1, 3), (2, 3)}
    assert all(i != 2 for i, _ in knn(idx, 2, 10))


def test_small_and_single_indexes():
    t = table({"x": [1.0, 0.0], "y": [0.0, 1.0]})
    idx = SynsetVectorIndex.build([syn(0, "x"), syn(1, "y")], t)
    assert len(knn(idx, 0, 10)) == 1
    one = SynsetVectorIndex.build([syn(0, "x")], t)
    assert mutual_pairs(one, 5) == {}
    assert knn(one, 0, 3) == []


def test_skipped_and_unknown_queries():
    t = table({"x": [1.0, 0.0]})
    idx = SynsetVectorIndex.build([syn(0, "x"), syn(1, "oov")], t)
    assert idx.skipped == {1}
    assert set(idx.ids.tolist()) | idx.skipped == {0, 1}
    with pytest.raises(KeyError, match="no vector"):
        knn(idx, 1, 1)
    with pytest.raises(KeyError, match="unknown"):
        knn(idx, 7, 1)


def test_ties_break_by_ascending_id():
    t = table({"a": [1.0, 0.0], "b": [0.0, 1.0], "c": [0.0, 1.0], "d": [0.0, 1.0]})
    idx = SynsetVectorIndex.build([syn(9, "a"), syn(5, "b"), syn(3, "c"), syn(7, "d")], t)
    assert [i for i, _ in knn(idx, 9, 3)] == [3, 5, 7]
    assert [i for i, _ in knn(idx, 5, 2)] == [3, 7]


def test_format_mutual_pairs():
    assert format_mutual_pairs({(1, 2): 0.5, (0, 3): 0.9}) == "0\t3\t0.900000\n1\t2\t0.500000\n"


# -- properties -------------------------------------------------------------


@st.composite
def indexes(draw, max_n=40):
    n = draw(st.integers(1, max_n))
    dim = draw(st.integers(1, 4))
    # small integer grids produce plenty of exact ties
    coords = draw(st.lists(st.lists(st.integers(-2, 2), min_size=dim, max_size=dim),
                           min_size=n, max_size=n))
    words = {f"w{i}": c for i, c in enumerate(coords) if any(c)}
    if not words:
        words = {"w0": [1] + [0] * (dim - 1)}
    ids = draw(st.permutations(range(len(words))))
    synsets = [syn(i, w) for i, w in zip(ids, words)]
    return SynsetVectorIndex.build(synsets, table(words)), synsets, words


@settings(max_examples=150, deadline=None)
@given(indexes(), st.integers(1, 8))
def test_knn_equals_brute_force(data, k):
    idx, synsets, words = data
    ids = [s.id for s in synsets]
    vecs = [words[s.words[0]] for s in synsets]
    nbr, sim = idx.neighbor_lists(k)
    for q in ids:
        got = knn(idx, q, k)
        assert got == brute_knn(vecs, ids, q, k)
        row = idx._pos[q]
        assert [int(idx.ids[c]) for c in nbr[row]] == [i for i, _ in got]
    assert np.allclose(np.linalg.norm(idx.matrix, axis=1), 1.0, atol=1e-9)


@settings(max_examples=150, deadline=None)
@given(indexes(), st.integers(1, 6))
def test_mutual_pairs_symmetric_monotone_bounded(data, k):
    idx, _, _ = data
    pairs = mutual_pairs(idx, k)
    lists = {int(i): {j for j, _ in knn(idx, int(i), k)} for i in idx.ids}
    expected = {(a, b) for a in lists for b in lists[a] if a < b and a in lists[b]}
    assert set(pairs) == expected
    for (a, b), s in pairs.items():
        assert a < b and -1 - 1e-12 <= s <= 1 + 1e-12
        assert abs(s - float(idx.vector(a) @ idx.vector(b))) <= 1e-9
    assert set(pairs) <= set(mutual_pairs(idx, k + 1))
    if len(idx) and k >= len(idx) - 1:
        assert len(pairs) == len(idx) * (len(idx) - 1) // 2


def test_block_size_does_not_change_results(monkeypatch):
    rng = np.random.default_rng(1)
    words = {f"w{i}": rng.standard_normal(5) for i in range(150)}
    idx = SynsetVectorIndex.build([syn(i, w) for i, w in enumerate(words)], table(words))
    ref = mutual_pairs(idx, 4)
    monkeypatch.setattr(embed, "BLOCK", 7)
    assert mutual_pairs(idx, 4) == ref


def test_backends_agree_bitwise(backend):
    from synsetkit import _pure

    rng = np.random.default_rng(2)
    m = np.round(rng.standard_normal((300, 3)), 1)
    words = {f"w{i}": v for i, v in enumerate(m) if v.any()}
    idx = SynsetVectorIndex.build([syn(i, w) for i, w in enumerate(words)], table(words))
    nbr, sim = idx.neighbor_lists(6)
    for r in range(len(idx)):
        exact = [(-_pure.seq_dot(idx.matrix, r, c), c) for c in range(len(idx)) if c != r]
        ref = sorted(exact)[:6]
        assert nbr[r].tolist() == [c for _, c in ref]
        assert sim[r].tolist() == [-s for s, _ in ref]
