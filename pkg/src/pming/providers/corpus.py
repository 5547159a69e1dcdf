"""Inverted index over a local corpus: the deterministic stand-in for a search engine."""

from __future__ import annotations

import datetime as _dt
import json
import logging
import os
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple

import numpy as np

from .. import kernels
from ..errors import DuplicateDocument, EmptyCorpus, ParseError
from .text import TermLike, as_term, tokenize

logger = logging.getLogger(__name__)

INDEX_FORMAT = "pming-corpus-index"
INDEX_VERSION = 1

_EMPTY = np.empty(0, dtype=np.int64)
_EMPTY.setflags(write=False)


class CorpusIndex:
    """Token -> sorted document-index postings, plus the document count.

    Instances are immutable after construction and safe to query from
    several threads.
    """

    def __init__(self, postings: Dict[str, np.ndarray], doc_ids: Sequence, metadata=None,
                 provider_id: str = "corpus"):
        self.postings = postings
        self.doc_ids = list(doc_ids)
        self.doc_count = len(self.doc_ids)
        self.metadata = dict(metadata or {})
        self.provider_id = provider_id
        for arr in postings.values():
            arr.setflags(write=False)

    def __repr__(self):
        return f"CorpusIndex(docs={self.doc_count}, tokens={len(self.postings)})"

    # provider contract

    def corpus_size(self) -> int:
        return self.doc_count

    def occurrence(self, term: TermLike) -> int:
        return int(self.term_postings(term).size)

    def cooccurrence(self, x: TermLike, y: TermLike) -> int:
        x, y = as_term(x), as_term(y)
        return int(self._postings_for_tokens(x.tokens + y.tokens).size)

    # batch / helpers

    def term_postings(self, term: TermLike) -> np.ndarray:
        """Documents containing every token of ``term``."""
        return self._postings_for_tokens(as_term(term).tokens)

    def _postings_for_tokens(self, tokens) -> np.ndarray:
        lists = []
        for token in set(tokens):
            arr = self.postings.get(token)
            if arr is None:
                return _EMPTY
            lists.append(arr)
        lists.sort(key=len)
        result = lists[0]
        for arr in lists[1:]:
            if not result.size:
                break
            result = kernels.intersect_sorted(result, arr)
        return result

    def pairwise_counts(self, terms: Sequence[TermLike]) -> Tuple[np.ndarray, np.ndarray]:
        """Occurrence vector and full co-occurrence matrix (diagonal = occurrence)."""
        postings = [self.term_postings(t) for t in terms]
        matrix = kernels.pairwise_cooccurrence(postings, self.doc_count)
        return np.diagonal(matrix).copy(), matrix

    # persistence

    def to_json(self) -> dict:
        return {
            "format": INDEX_FORMAT,
            "version": INDEX_VERSION,
            "doc_count": self.doc_count,
            "doc_ids": self.doc_ids,
            "metadata": self.metadata,
            "postings": {tok: arr.tolist() for tok, arr in sorted(self.postings.items())},
        }

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, ensure_ascii=False, separators=(",", ":"))

    @classmethod
    def load(cls, path) -> "CorpusIndex":
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, f"{path}: line {exc.lineno} column {exc.colno}") from exc
        if not isinstance(data, dict) or data.get("format") != INDEX_FORMAT:
            raise ParseError("not a corpus index file", str(path))
        try:
            doc_ids = data["doc_ids"]
            postings = {tok: np.asarray(ids, dtype=np.int64) for tok, ids in data["postings"].items()}
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad index structure ({exc})", str(path)) from exc
        n = len(doc_ids)
        for tok, arr in postings.items():
            if arr.ndim != 1 or (arr.size and (arr[0] < 0 or arr[-1] >= n or np.any(np.diff(arr) <= 0))):
                raise ParseError("posting list not strictly sorted within range", f"{path}: postings[{tok!r}]")
        return cls(postings, doc_ids, data.get("metadata"), provider_id=f"corpus:{Path(path).name}")


def index_corpus(documents: Iterable[Tuple[object, str]], metadata=None,
                 provider_id: str = "corpus") -> CorpusIndex:
    """Build a :class:`CorpusIndex` from ``(doc_id, text)`` pairs.

    Every document counts towards the corpus size, including ones with no
    tokens.
    """
    seen = set()
    doc_ids: List = []
    lists: Dict[str, List[int]] = {}
    for doc_id, text in documents:
        if doc_id in seen:
            raise DuplicateDocument(f"duplicate document id {doc_id!r}")
        seen.add(doc_id)
        index = len(doc_ids)
        doc_ids.append(doc_id)
        for token in set(tokenize(text)):
            lists.setdefault(token, []).append(index)
    if not doc_ids:
        raise EmptyCorpus("no documents to index")
    postings = {tok: np.asarray(ids, dtype=np.int64) for tok, ids in lists.items()}
    meta = {"built_at": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")}
    meta.update(metadata or {})
    return CorpusIndex(postings, doc_ids, meta, provider_id=provider_id)


def iter_documents(path) -> Iterator[Tuple[str, str]]:
    """Yield ``(doc_id, text)`` from a directory of ``.txt`` files or a JSON-lines file."""
    path = Path(path)
    if path.is_dir():
        for file in sorted(p for p in path.rglob("*.txt") if p.is_file()):
            yield file.relative_to(path).as_posix(), file.read_text(encoding="utf-8")
        return
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(exc.msg, f"{path}: line {lineno} column {exc.colno}") from exc
            if not isinstance(obj, dict):
                raise ParseError("expected a JSON object", f"{path}: line {lineno}")
            for key in ("id", "text"):
                if not isinstance(obj.get(key), str):
                    raise ParseError(f"field {key!r} must be a string", f"{path}: line {lineno}")
            yield obj["id"], obj["text"]


def index_path(path) -> CorpusIndex:
    """Index a corpus directory or JSON-lines file."""
    index = index_corpus(iter_documents(path), metadata={"sources": [os.fspath(path)]},
                         provider_id=f"corpus:{Path(path).name}")
    logger.info("indexed %d documents, %d distinct tokens", index.doc_count, len(index.postings))
    return index
