"""Retrieval engine with distribution- and association-based query expansion."""

__version__ = "0.1.0"

from .analysis import AnalyzerConfig, analyze, default_stopwords, load_stopwords
from .combine import CombinationParams, MethodSpec, combine_expand, default_method_matrix, run_matrix
from .expansion import CandidateTerm, ExpansionParams, expand
from .index import CorpusIndex, build_index, load_index, save_index
from .retrieval import (
    Bm25Weighting,
    Ifb2Weighting,
    ScoredDoc,
    WeightedQuery,
    pseudo_relevant_set,
    retrieve,
)
from .trec import RawDocument, Topic, parse_topics, parse_trec_documents

__all__ = [
    "AnalyzerConfig",
    "Bm25Weighting",
    "CandidateTerm",
    "CombinationParams",
    "CorpusIndex",
    "ExpansionParams",
    "Ifb2Weighting",
    "MethodSpec",
    "RawDocument",
    "ScoredDoc",
    "Topic",
    "WeightedQuery",
    "analyze",
    "build_index",
    "combine_expand",
    "default_method_matrix",
    "default_stopwords",
    "expand",
    "load_index",
    "load_stopwords",
    "parse_topics",
    "parse_trec_documents",
    "pseudo_relevant_set",
    "retrieve",
    "run_matrix",
    "save_index",
]
