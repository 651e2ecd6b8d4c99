"""Merging of near-duplicate synsets that are mutual nearest neighbors."""

from dataclasses import dataclass

from .embed import mutual_pairs
from .errors import DataError
from .watset import Synset


@dataclass(frozen=True)
class MergeParams:
    t: int = 1
    k: int = 10

    def __post_init__(self):
        if self.t < 1:
            raise ValueError(f"t must be >= 1, got {self.t}")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")

    @property
    def tag(self):
        return f"t{self.t}-knn{self.k}"


@dataclass(frozen=True)
class MergeGroup:
    initiator: int
    members: tuple
    similarities: tuple  # similarity of each non-initiator member to the initiator


@dataclass(frozen=True)
class MergePlan:
    groups: tuple

    def __len__(self):
        return len(self.groups)

    def id_sets(self):
        return [frozenset(g.members) for g in self.groups]

    def format_audit(self):
        """One line per group: initiator, then ``id:similarity`` per partner."""
        lines = []
        for g in self.groups:
            partners = ", ".join(
                f"{m}:{s:.6f}" for m, s in zip(g.members[1:], g.similarities)
            )
            lines.append(f"{g.initiator}\t{len(g.members)}\t{partners}\n")
        return "".join(lines)


def plan_merges(synsets, index, params, pairs=None):
    """Plan merge groups, smallest synsets first, each synset merged once.

    Synsets are visited in ascending size (ties: ascending id).  An unconsumed
    synset takes up to ``t`` of its still-unconsumed mutual neighbors in
    descending similarity order; it and its partners become one group and are
    all consumed.  ``pairs`` may pass precomputed :func:`mutual_pairs` output.
    """
    if pairs is None:
        pairs = mutual_pairs(index, params.k)
    partners = {}
    for (a, b), s in pairs.items():
        partners.setdefault(a, []).append((-s, b))
        partners.setdefault(b, []).append((-s, a))
    for lst in partners.values():
        lst.sort()
    consumed = set()
    groups = []
    for s in sorted(synsets, key=lambda x: (len(x), x.id)):
        if s.id in consumed or s.id not in partners:
            continue
        taken = []
        for neg_sim, other in partners[s.id]:
            if other in consumed:
                continue
            taken.append((other, -neg_sim))
            if len(taken) == params.t:
                break
        if not taken:
            continue
        consumed.add(s.id)
        consumed.update(o for o, _ in taken)
        groups.append(MergeGroup(
            s.id,
            (s.id,) + tuple(o for o, _ in taken),
            tuple(sim for _, sim in taken),
        ))
    return MergePlan(tuple(groups))


def apply_merges(synsets, plan):
    """Replace each planned group by the union of its senses.

    Output ids are reassigned by descending size, ties by smallest original id.
    Senses are kept as-is, so two senses of one word may share a synset.
    """
    by_id = {s.id: s for s in synsets}
    grouped = {}
    for gi, g in enumerate(plan.groups):
        for m in g.members:
            if m not in by_id:
                raise DataError(f"merge plan refers to unknown synset id {m}")
            if m in grouped:
                raise DataError(f"synset {m} appears in two merge groups")
            grouped[m] = gi
    merged = [[] for _ in plan.groups]
    first = [None] * len(plan.groups)
    out = []
    for s in synsets:
        gi = grouped.get(s.id)
        if gi is None:
            out.append((s.id, tuple(s.senses)))
        else:
            merged[gi].extend(s.senses)
            first[gi] = s.id if first[gi] is None else min(first[gi], s.id)
    for gi, senses in enumerate(merged):
        out.append((first[gi], tuple(sorted(senses))))
    out.sort(key=lambda x: (-len(x[1]), x[0]))
    return [Synset(i, senses) for i, (_, senses) in enumerate(out)]


def merge_synsets(synsets, index, params):
    """Plan and apply merges; returns ``(merged_synsets, plan)``."""
    plan = plan_merges(synsets, index, params)
    return apply_merges(synsets, plan), plan


__all__ = ["MergeParams", "MergePlan", "plan_merges", "apply_merges", "merge_synsets"]
