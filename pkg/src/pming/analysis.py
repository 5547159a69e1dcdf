"""Batch products over a context: distance matrices and top-K rankings."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .context import Context, score_pair
from .errors import NoCandidates, PairError, PmingError
from .measures import ScoreReport, Variant, pming_pair
from .providers.text import TermLike, as_term
from .serialize import json_real, text_real


@dataclass(frozen=True)
class DistanceMatrix:
    terms: Tuple[str, ...]
    values: np.ndarray
    reports: Tuple[Tuple[ScoreReport, ...], ...]
    rho: float
    variant: Variant
    mu1: float
    mu2: float

    def __getitem__(self, pair):
        i, j = (self.terms.index(as_term(t).key) if not isinstance(t, int) else t for t in pair)
        return float(self.values[i, j])

    def row(self, term: TermLike) -> np.ndarray:
        return self.values[self.terms.index(as_term(term).key)]

    def to_tsv(self) -> str:
        lines = ["\t".join(self.terms)]
        for term, row in zip(self.terms, self.values):
            lines.append("\t".join([term, *(text_real(v) for v in row)]))
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "terms": list(self.terms),
            "rho": json_real(self.rho),
            "variant": self.variant.value,
            "mu1": json_real(self.mu1),
            "mu2": json_real(self.mu2),
            "values": [[json_real(v) for v in row] for row in self.values],
            "flags": [[sorted(r.flags) for r in row] for row in self.reports],
        }


def distance_matrix(ctx: Context) -> DistanceMatrix:
    """Score every unordered in-context pair once and mirror it.

    The diagonal is computed like any other pair (f(x, x) = f(x)), not
    fixed at zero.
    """
    n = len(ctx.terms)
    keys = ctx.keys
    params = ctx.params
    values = np.empty((n, n), dtype=np.float64)
    reports: List[List[Optional[ScoreReport]]] = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            try:
                report = pming_pair(ctx.pairs[(i, j)], params, keys[i], keys[j])
            except PmingError as exc:
                raise PairError(keys[i], keys[j], exc) from exc
            values[i, j] = values[j, i] = report.pming
            reports[i][j] = reports[j][i] = report
    return DistanceMatrix(
        terms=keys,
        values=values,
        reports=tuple(tuple(r) for r in reports),
        rho=ctx.rho,
        variant=ctx.variant,
        mu1=ctx.mu1,
        mu2=ctx.mu2,
    )


@dataclass(frozen=True)
class RankedEntry:
    term: str
    pming: float
    flags: frozenset
    report: ScoreReport

    def to_json(self) -> dict:
        return {"term": self.term, "pming": json_real(self.pming), "flags": sorted(self.flags)}


@dataclass(frozen=True)
class RankedList:
    query: str
    entries: Tuple[RankedEntry, ...]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    @property
    def terms(self) -> List[str]:
        return [e.term for e in self.entries]

    def to_json(self) -> list:
        return [e.to_json() for e in self.entries]

    def to_tsv(self) -> str:
        lines = ["term\tpming\tflags"]
        lines += [f"{e.term}\t{text_real(e.pming)}\t{','.join(sorted(e.flags))}" for e in self.entries]
        return "\n".join(lines) + "\n"


def top_k(ctx: Context, query: TermLike, k: int,
          candidates: Optional[Sequence[TermLike]] = None) -> RankedList:
    """The ``k`` candidates closest to ``query``, ascending by PMING.

    Ties are broken by the normalized candidate text.  Candidates outside
    the context are scored through its provider and flagged.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    q = as_term(query)
    if candidates is None:
        pool = [t for t in ctx.terms if t.key != q.key]
    else:
        seen, pool = set(), []
        for c in map(as_term, candidates):
            if c.key not in seen:
                seen.add(c.key)
                pool.append(c)
    if not pool:
        raise NoCandidates(f"no candidates to rank against {q.key!r}")
    entries = []
    for cand in pool:
        try:
            report = score_pair(ctx, q, cand)
        except PairError:
            raise
        except PmingError as exc:
            raise PairError(q.key, cand.key, exc) from exc
        entries.append(RankedEntry(cand.key, report.pming, report.flags, report))
    entries.sort(key=lambda e: (e.pming, e.term))
    return RankedList(q.key, tuple(entries[:k]))

