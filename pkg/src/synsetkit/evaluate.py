"""Paired precision, recall and F-score of clusterings.

Every cluster of ``n`` words contributes its ``n (n - 1) / 2`` unordered word
pairs; pairs are pooled as a set across clusters.  Both sides are first
restricted to the words they share.
"""

from dataclasses import dataclass
from itertools import combinations


@dataclass(frozen=True)
class EvalReport:
    precision: float
    recall: float
    f1: float
    tp: int
    predicted_pairs: int
    gold_pairs: int
    lexicon_size: int

    def line(self):
        """Machine-readable tab-separated line."""
        return (
            f"{self.precision:.6f}\t{self.recall:.6f}\t{self.f1:.6f}\t"
            f"{self.tp}\t{self.predicted_pairs}\t{self.gold_pairs}\t{self.lexicon_size}"
        )

    def text(self):
        out = (
            f"precision {self.precision:.4f}  recall {self.recall:.4f}  f1 {self.f1:.4f}\n"
            f"true pairs {self.tp}, predicted pairs {self.predicted_pairs}, "
            f"gold pairs {self.gold_pairs}, lexicon {self.lexicon_size}\n"
        )
        if not self.predicted_pairs or not self.gold_pairs:
            out += "note: a side without pairs scores 0 by convention\n"
        return out


def cluster_pairs(clusters):
    """Union of all unordered member pairs, as sorted tuples."""
    pairs = set()
    for c in clusters:
        pairs.update(combinations(sorted(set(c)), 2))
    return pairs


def restrict_to_lexicon(clusters, lexicon):
    """Intersect every cluster with ``lexicon``, dropping empty results."""
    out = []
    for c in clusters:
        kept = set(c) & lexicon
        if kept:
            out.append(kept)
    return out


def _words(clusters):
    words = set()
    for c in clusters:
        words.update(c)
    return words


def f_score(p, r):
    return 2 * p * r / (p + r) if p + r > 0 else 0.0


def paired_prf(predicted, gold):
    """Paired P/R/F of ``predicted`` against ``gold`` word clusters."""
    lexicon = _words(predicted) & _words(gold)
    pp = cluster_pairs(restrict_to_lexicon(predicted, lexicon))
    pg = cluster_pairs(restrict_to_lexicon(gold, lexicon))
    tp = len(pp & pg)
    p = tp / len(pp) if pp else 0.0
    r = tp / len(pg) if pg else 0.0
    return EvalReport(p, r, f_score(p, r), tp, len(pp), len(pg), len(lexicon))
