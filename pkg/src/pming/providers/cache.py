"""Persistent pair-count cache in a single SQLite file.

Keys are (provider id, ordered term pair); values are the four counts and
the fetch time.  Live counts drift, so entries expire after a TTL.
"""

from __future__ import annotations

import logging
import os
import sqlite3
import threading
import time
from pathlib import Path
from typing import Optional

from ..measures import PairCounts
from .base import CountProvider, lookup_counts
from .text import TermLike, as_term

logger = logging.getLogger(__name__)

CACHE_ENV = "PMING_CACHE"
DEFAULT_TTL = 7 * 24 * 3600.0

_SCHEMA = """
CREATE TABLE IF NOT EXISTS pair_counts (
    provider TEXT NOT NULL,
    a TEXT NOT NULL,
    b TEXT NOT NULL,
    f_a INTEGER NOT NULL,
    f_b INTEGER NOT NULL,
    f_ab INTEGER NOT NULL,
    m INTEGER NOT NULL,
    fetched_at REAL NOT NULL,
    PRIMARY KEY (provider, a, b)
)
"""


def default_cache_path() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or Path.home() / ".cache"
    return Path(base) / "pming" / "counts.sqlite3"


class CountCache:
    """SQLite-backed store.  Reads and writes are serialized by one lock."""

    def __init__(self, path=None, ttl: float = DEFAULT_TTL, clock=time.time):
        self.path = Path(path) if path is not None else default_cache_path()
        self.ttl = ttl
        self._clock = clock
        self._lock = threading.Lock()
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._conn = sqlite3.connect(self.path, check_same_thread=False)
        with self._conn:
            self._conn.execute(_SCHEMA)

    def close(self):
        with self._lock:
            self._conn.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    @staticmethod
    def _key(x, y):
        return (x.key, y.key, False) if x.key <= y.key else (y.key, x.key, True)

    def get(self, provider_id: str, x: TermLike, y: TermLike) -> Optional[PairCounts]:
        x, y = as_term(x), as_term(y)
        a, b, swapped = self._key(x, y)
        with self._lock:
            row = self._conn.execute(
                "SELECT f_a, f_b, f_ab, m, fetched_at FROM pair_counts WHERE provider=? AND a=? AND b=?",
                (provider_id, a, b),
            ).fetchone()
        if row is None:
            return None
        f_a, f_b, f_ab, m, fetched_at = row
        if self._clock() - fetched_at >= self.ttl:
            return None
        counts = PairCounts(f_a, f_b, f_ab, m)
        return counts.swapped() if swapped else counts

    def put(self, provider_id: str, x: TermLike, y: TermLike, counts: PairCounts) -> None:
        x, y = as_term(x), as_term(y)
        a, b, swapped = self._key(x, y)
        if swapped:
            counts = counts.swapped()
        with self._lock, self._conn:
            self._conn.execute(
                "INSERT OR REPLACE INTO pair_counts VALUES (?, ?, ?, ?, ?, ?, ?, ?)",
                (provider_id, a, b, counts.f_x, counts.f_y, counts.f_xy, counts.m, self._clock()),
            )

    def __len__(self):
        with self._lock:
            return self._conn.execute("SELECT COUNT(*) FROM pair_counts").fetchone()[0]


def cached_lookup(cache: Optional[CountCache], inner: CountProvider, x: TermLike, y: TermLike) -> PairCounts:
    """Cached :func:`lookup_counts`.  Cache failures fall back to querying ``inner``."""
    x, y = as_term(x), as_term(y)
    if cache is not None:
        try:
            hit = cache.get(inner.provider_id, x, y)
        except (sqlite3.Error, OSError) as exc:
            logger.warning("count cache read failed (%s); querying provider directly", exc)
            hit = None
        if hit is not None:
            return hit
    counts = lookup_counts(inner, x, y)
    if cache is not None:
        try:
            cache.put(inner.provider_id, x, y, counts)
        except (sqlite3.Error, OSError) as exc:
            logger.warning("count cache write failed (%s); result not stored", exc)
    return counts


class CachedProvider:
    """Wraps a provider so pair lookups go through a :class:`CountCache`."""

    def __init__(self, inner: CountProvider, cache: CountCache):
        self.inner = inner
        self.cache = cache
        self.provider_id = inner.provider_id

    def corpus_size(self) -> int:
        return self.inner.corpus_size()

    def occurrence(self, term: TermLike) -> int:
        return self.inner.occurrence(term)

    def cooccurrence(self, x: TermLike, y: TermLike) -> int:
        return self.inner.cooccurrence(x, y)

    def pair_counts(self, x: TermLike, y: TermLike) -> PairCounts:
        return cached_lookup(self.cache, self.inner, x, y)
