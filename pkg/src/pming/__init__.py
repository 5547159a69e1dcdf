"""PMING semantic proximity from document hit counts.

PMING mixes a context-normalized PMI distance with a context-normalized
NGD-style spread term, weighted by ``rho``.  Counts come from a local
corpus index, a static JSON table, or a search engine over HTTP.
"""

from .analysis import DistanceMatrix, RankedList, distance_matrix, top_k
from .context import Context, build_context, distance, proximity, score_pair
from .errors import PmingError
from .measures import (
    DEFAULT_RHO,
    MeasureParams,
    PairCounts,
    ScoreReport,
    Variant,
    pmi,
    pming_pair,
    spread_term,
)
from .providers import (
    CountTable,
    CorpusIndex,
    HttpCountProvider,
    HttpProviderConfig,
    Term,
    index_corpus,
    load_count_table,
    lookup_counts,
)

__version__ = "0.1.0"

__all__ = [
    "Context",
    "CorpusIndex",
    "CountTable",
    "DEFAULT_RHO",
    "DistanceMatrix",
    "HttpCountProvider",
    "HttpProviderConfig",
    "MeasureParams",
    "PairCounts",
    "PmingError",
    "RankedList",
    "ScoreReport",
    "Term",
    "Variant",
    "build_context",
    "distance",
    "distance_matrix",
    "index_corpus",
    "load_count_table",
    "lookup_counts",
    "pmi",
    "pming_pair",
    "proximity",
    "score_pair",
    "spread_term",
    "top_k",
]
