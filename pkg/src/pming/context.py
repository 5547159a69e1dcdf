"""Normalization contexts: a term set with every pairwise count and its mu1, mu2.

PMING values are only comparable within one context, since mu1 (the largest
in-context PMI) and mu2 (the largest in-context spread term) fix the scale of
both components.
"""

from __future__ import annotations

import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from pathlib import Path
from typing import Dict, Iterable, Optional, Sequence, Tuple

from .errors import (
    ContextTooSmall,
    DegeneratePmiContext,
    OutOfContext,
    PairError,
    ParseError,
    PmingError,
    SingularDenominator,
    UndefinedForZeroOccurrence,
)
from .measures import (
    DEFAULT_RHO,
    OUT_OF_CONTEXT,
    MeasureParams,
    PairCounts,
    ScoreReport,
    Variant,
    pmi,
    pming_pair,
    spread_term,
)
from .providers.base import CountProvider, lookup_counts
from .providers.cache import CachedProvider
from .providers.text import Term, TermLike, as_term

logger = logging.getLogger(__name__)

CONTEXT_FORMAT = "pming-context"
CONTEXT_VERSION = 1

# Reasons a pair is left out of a maximum.
EXCLUDED_ZERO_OCCURRENCE = "zero_occurrence"
EXCLUDED_ZERO_COOCCURRENCE = "zero_cooccurrence"
EXCLUDED_SINGULAR = "singular_denominator"
EXCLUDED_INFINITE_SPREAD = "infinite_spread"


@dataclass(frozen=True)
class Context:
    terms: Tuple[Term, ...]
    m: int
    pairs: Dict[Tuple[int, int], PairCounts] = field(repr=False)
    mu1: float
    mu2: float
    rho: float
    variant: Variant
    provider_id: str
    mu1_pair: Tuple[int, int]
    mu2_pair: Optional[Tuple[int, int]]
    excluded: Dict[Tuple[int, int], Tuple[str, ...]] = field(default_factory=dict, repr=False)
    provider: Optional[CountProvider] = field(default=None, repr=False, compare=False)

    @property
    def params(self) -> MeasureParams:
        return MeasureParams(rho=self.rho, mu1=self.mu1, mu2=self.mu2, variant=self.variant)

    @property
    def keys(self) -> Tuple[str, ...]:
        return tuple(t.key for t in self.terms)

    def index_of(self, term: TermLike) -> Optional[int]:
        key = as_term(term).key
        return self._positions.get(key)

    @property
    def _positions(self):
        # Cached on first use; the dataclass is frozen so go through __dict__.
        cache = self.__dict__.get("_pos")
        if cache is None:
            cache = {t.key: i for i, t in enumerate(self.terms)}
            object.__setattr__(self, "_pos", cache)
        return cache

    def counts(self, i: int, j: int) -> PairCounts:
        """Stored counts oriented as (terms[i], terms[j])."""
        if i <= j:
            return self.pairs[(i, j)]
        return self.pairs[(j, i)].swapped()

    def score(self, x: TermLike, y: TermLike) -> ScoreReport:
        return score_pair(self, x, y)

    def with_params(self, rho: Optional[float] = None, variant: Optional[Variant] = None) -> "Context":
        """Same counts under a different rho or variant (mu2 is recomputed for the variant)."""
        return _finalize(self.terms, self.m, self.pairs,
                         self.rho if rho is None else rho,
                         self.variant if variant is None else variant,
                         self.provider_id, self.provider)

    # export / import

    def to_json(self) -> dict:
        pairs = []
        for (i, j), c in sorted(self.pairs.items()):
            pairs.append({"a": self.terms[i].key, "b": self.terms[j].key,
                          "f_a": c.f_x, "f_b": c.f_y, "f_ab": c.f_xy})
        return {
            "format": CONTEXT_FORMAT,
            "version": CONTEXT_VERSION,
            "terms": list(self.keys),
            "M": self.m,
            "mu1": self.mu1,
            "mu2": self.mu2,
            "rho": self.rho,
            "variant": self.variant.value,
            "provider_id": self.provider_id,
            "pairs": pairs,
        }

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=1, ensure_ascii=False) + "\n",
                              encoding="utf-8")

    @classmethod
    def from_json(cls, data: dict, provider: Optional[CountProvider] = None,
                  source: str = "<context>") -> "Context":
        """Rebuild a frozen context.  Stored mu1/mu2 must match the stored counts exactly."""
        if not isinstance(data, dict) or data.get("format") != CONTEXT_FORMAT:
            raise ParseError("not a context file", source)
        try:
            terms = tuple(Term.parse(t) for t in data["terms"])
            position = {t.key: i for i, t in enumerate(terms)}
            m = data["M"]
            pairs = {}
            for entry in data["pairs"]:
                i, j = position[Term.parse(entry["a"]).key], position[Term.parse(entry["b"]).key]
                c = PairCounts(entry["f_a"], entry["f_b"], entry["f_ab"], m)
                if i > j:
                    i, j, c = j, i, c.swapped()
                pairs[(i, j)] = c
            expected = {(i, j) for i, j in combinations_with_replacement(range(len(terms)), 2)}
            if set(pairs) != expected:
                raise ParseError("pairs table is not complete over terms x terms", source)
            ctx = _finalize(terms, m, pairs, data["rho"], Variant(data["variant"]),
                            data["provider_id"], provider)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"bad context structure ({type(exc).__name__}: {exc})", source) from exc
        for name in ("mu1", "mu2"):
            if getattr(ctx, name) != data[name]:
                raise ParseError(f"stored {name}={data[name]!r} disagrees with counts ({getattr(ctx, name)!r})",
                                 source)
        return ctx

    @classmethod
    def load(cls, path, provider: Optional[CountProvider] = None) -> "Context":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, f"{path}: line {exc.lineno} column {exc.colno}") from exc
        return cls.from_json(data, provider=provider, source=str(path))


def _dedupe(terms: Iterable[TermLike]) -> Tuple[Term, ...]:
    seen = {}
    for t in terms:
        t = as_term(t)
        if t.key in seen:
            logger.warning("duplicate context term %r (normalizes to %r) dropped", t.display, t.key)
            continue
        seen[t.key] = t
    return tuple(seen.values())


def _fetch_pairs(terms, provider, parallelism):
    n = len(terms)
    index_pairs = list(combinations_with_replacement(range(n), 2))
    batch = getattr(provider, "pairwise_counts", None)
    if batch is not None and not isinstance(provider, CachedProvider):
        occ, matrix = batch(terms)
        m = provider.corpus_size()
        occ = [int(v) for v in occ]
        return {(i, j): PairCounts(occ[i], occ[j], int(matrix[i, j]), m) for i, j in index_pairs}

    def fetch(ij):
        i, j = ij
        try:
            return lookup_counts(provider, terms[i], terms[j])
        except PmingError as exc:
            raise PairError(terms[i].key, terms[j].key, exc, provider.provider_id) from exc

    if parallelism > 1:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            results = list(pool.map(fetch, index_pairs))
    else:
        results = [fetch(ij) for ij in index_pairs]
    return dict(zip(index_pairs, results))


def _finalize(terms, m, pairs, rho, variant, provider_id, provider) -> Context:
    variant = Variant(variant)
    excluded: Dict[Tuple[int, int], Tuple[str, ...]] = {}
    best_pmi = None
    best_spread = None
    # Visiting pairs in key order with a strict ">" makes ties resolve to the
    # lexicographically first pair, independent of input order.
    off_diagonal = sorted(
        ((i, j) for i in range(len(terms)) for j in range(i + 1, len(terms))),
        key=lambda ij: tuple(sorted((terms[ij[0]].key, terms[ij[1]].key))),
    )
    for i, j in off_diagonal:
        c = pairs[(i, j)]
        reasons = []
        try:
            value = pmi(c)
        except UndefinedForZeroOccurrence:
            excluded[(i, j)] = (EXCLUDED_ZERO_OCCURRENCE,)
            continue
        if value == -math.inf:
            reasons.append(EXCLUDED_ZERO_COOCCURRENCE)
        elif best_pmi is None or value > best_pmi[0]:
            best_pmi = (value, (i, j))
        try:
            spread = spread_term(c, variant)
        except SingularDenominator:
            reasons.append(EXCLUDED_SINGULAR)
        else:
            if math.isinf(spread):
                reasons.append(EXCLUDED_INFINITE_SPREAD)
            elif best_spread is None or spread > best_spread[0]:
                best_spread = (spread, (i, j))
        if reasons:
            excluded[(i, j)] = tuple(reasons)

    if best_pmi is None:
        raise DegeneratePmiContext("no pair in the context co-occurs; mu1 is undefined")
    if best_pmi[0] <= 0.0:
        raise DegeneratePmiContext(f"largest in-context PMI is {best_pmi[0]!r} <= 0")
    mu2, mu2_pair = (best_spread[0], best_spread[1]) if best_spread is not None else (0.0, None)
    mu2 = max(mu2, 0.0)
    if mu2 == 0.0:
        mu2_pair = None
    for (i, j), reasons in sorted(excluded.items()):
        if EXCLUDED_SINGULAR in reasons or EXCLUDED_ZERO_OCCURRENCE in reasons:
            logger.warning("pair (%s, %s) excluded from context maxima: %s",
                           terms[i].key, terms[j].key, ", ".join(reasons))
    return Context(
        terms=tuple(terms),
        m=m,
        pairs=dict(pairs),
        mu1=best_pmi[0],
        mu2=mu2,
        rho=MeasureParams(rho=rho).rho,
        variant=variant,
        provider_id=provider_id,
        mu1_pair=best_pmi[1],
        mu2_pair=mu2_pair,
        excluded=excluded,
        provider=provider,
    )


def build_context(
    terms: Sequence[TermLike],
    provider: CountProvider,
    rho: float = DEFAULT_RHO,
    variant: Variant = Variant.PAPER,
    *,
    parallelism: int = 1,
) -> Context:
    """Fetch every pairwise count for ``terms`` and derive mu1 and mu2.

    Pairs that never co-occur are left out of the mu1 maximum; pairs whose
    spread term is singular or infinite are left out of the mu2 maximum.
    Both kinds stay scoreable (or raise) at scoring time.

    Raises:
        ContextTooSmall: fewer than two distinct terms after normalization.
        DegeneratePmiContext: no pair co-occurs above chance.
    """
    unique = _dedupe(terms)
    if len(unique) < 2:
        raise ContextTooSmall(f"a context needs at least 2 distinct terms, got {len(unique)}")
    MeasureParams(rho=rho)
    pairs = _fetch_pairs(unique, provider, max(1, int(parallelism)))
    return _finalize(unique, provider.corpus_size(), pairs, rho, variant, provider.provider_id, provider)


def score_pair(ctx: Context, x: TermLike, y: TermLike) -> ScoreReport:
    """PMING of ``(x, y)`` under the context's mu1, mu2 and rho.

    Pairs outside the context are fetched through the context's provider
    and flagged ``out_of_context``.
    """
    x, y = as_term(x), as_term(y)
    i, j = ctx.index_of(x), ctx.index_of(y)
    if i is not None and j is not None:
        return pming_pair(ctx.counts(i, j), ctx.params, x.key, y.key)
    if ctx.provider is None:
        raise OutOfContext(f"pair ({x.key!r}, {y.key!r}) is not in the context and no provider is attached")
    try:
        counts = lookup_counts(ctx.provider, x, y)
    except PmingError as exc:
        raise PairError(x.key, y.key, exc, ctx.provider.provider_id) from exc
    return pming_pair(counts, ctx.params, x.key, y.key).with_flags(OUT_OF_CONTEXT)


def distance(ctx: Context, x: TermLike, y: TermLike) -> float:
    return score_pair(ctx, x, y).pming


def proximity(ctx: Context, x: TermLike, y: TermLike) -> float:
    return 1.0 - score_pair(ctx, x, y).pming
