"""Count sources: local corpus index, static tables, HTTP search engines, and a cache."""

from .base import CountProvider, lookup_counts
from .cache import CachedProvider, CountCache, cached_lookup, default_cache_path
from .corpus import CorpusIndex, index_corpus, index_path, iter_documents
from .http import HttpCountProvider, HttpProviderConfig, http_fetch_count, load_http_config
from .table import CountTable, load_count_table
from .text import Term, as_term, normalize, tokenize

__all__ = [
    "CountProvider",
    "lookup_counts",
    "CachedProvider",
    "CountCache",
    "cached_lookup",
    "default_cache_path",
    "CorpusIndex",
    "index_corpus",
    "index_path",
    "iter_documents",
    "HttpCountProvider",
    "HttpProviderConfig",
    "http_fetch_count",
    "load_http_config",
    "CountTable",
    "load_count_table",
    "Term",
    "as_term",
    "normalize",
    "tokenize",
]
