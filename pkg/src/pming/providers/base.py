"""The count-provider contract and the pair lookup built on it."""

from __future__ import annotations

from typing import Protocol, runtime_checkable

from ..measures import PairCounts
from .text import Term, TermLike, as_term


@runtime_checkable
class CountProvider(Protocol):
    """Anything that answers document-count queries.

    Counts are numbers of matching documents.  Multi-token terms match a
    document only if it contains every token.  ``corpus_size`` must not
    change over the provider's lifetime.
    """

    provider_id: str

    def occurrence(self, term: Term) -> int: ...

    def cooccurrence(self, x: Term, y: Term) -> int: ...

    def corpus_size(self) -> int: ...


def lookup_counts(provider: CountProvider, x: TermLike, y: TermLike) -> PairCounts:
    """PairCounts for ``(x, y)`` in that orientation.

    Providers with their own pair path (the caching wrapper) are asked
    directly so they can short-circuit the three queries.
    """
    x, y = as_term(x), as_term(y)
    pair_counts = getattr(provider, "pair_counts", None)
    if pair_counts is not None:
        return pair_counts(x, y)
    f_x = provider.occurrence(x)
    f_y = provider.occurrence(y)
    f_xy = f_x if x.tokens == y.tokens else provider.cooccurrence(x, y)
    return PairCounts(f_x, f_y, f_xy, provider.corpus_size())
