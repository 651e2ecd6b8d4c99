"""Synset induction from synonymy graphs."""

__version__ = "0.1.0"

from ._backend import BACKEND
from .cluster import Partition, FuzzyClustering, chinese_whispers, markov_clustering, maxmax
from .embed import EmbeddingTable, SynsetVectorIndex, load_embeddings, mutual_pairs
from .errors import DataError, ParseError, SynsetKitError
from .evaluate import EvalReport, paired_prf
from .expand import ExpansionParams, expand_graph
from .graph import SynonymyGraph, ego_network, load_edge_list, write_edge_list
from .merge import MergeParams, apply_merges, merge_synsets, plan_merges
from .watset import Sense, Synset, induce_senses, induce_synsets

__all__ = [
    "BACKEND", "Partition", "FuzzyClustering", "chinese_whispers", "markov_clustering",
    "maxmax", "EmbeddingTable", "SynsetVectorIndex", "load_embeddings", "mutual_pairs",
    "DataError", "ParseError", "SynsetKitError", "EvalReport", "paired_prf",
    "ExpansionParams", "expand_graph", "SynonymyGraph", "ego_network", "load_edge_list",
    "write_edge_list", "MergeParams", "apply_merges", "merge_synsets", "plan_merges",
    "Sense", "Synset", "induce_senses", "induce_synsets",
]
