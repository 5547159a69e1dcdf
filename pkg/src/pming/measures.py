"""PMI, the spread term and their PMING combination for a single term pair.

Everything here is a pure function of its arguments.  Logarithms are natural
by default; every public function takes a ``log`` keyword so callers can
recompute in another base (both PMING components are ratios of logs, so the
final value does not depend on the base as long as ``mu1`` is expressed in
the same base as the PMI values it normalizes).
"""

from __future__ import annotations

import enum
import math
import operator
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

from .errors import InvalidCounts, InvalidParams, SingularDenominator, UndefinedForZeroOccurrence

__all__ = [
    "Variant",
    "PairCounts",
    "MeasureParams",
    "ScoreReport",
    "pmi",
    "spread_term",
    "pming_pair",
    "DEFAULT_RHO",
    "ZERO_COOCCURRENCE",
    "CLAMPED_PMI",
    "CLAMPED_SPREAD",
    "INCONSISTENT_COUNTS",
    "DEGENERATE_SPREAD",
    "OUT_OF_CONTEXT",
]

DEFAULT_RHO = 0.3

ZERO_COOCCURRENCE = "zero_cooccurrence"
CLAMPED_PMI = "clamped_pmi"
CLAMPED_SPREAD = "clamped_spread"
INCONSISTENT_COUNTS = "inconsistent_counts"
DEGENERATE_SPREAD = "degenerate_spread"
OUT_OF_CONTEXT = "out_of_context"

LogFn = Callable[[float], float]


class Variant(str, enum.Enum):
    """Numerator of the second component.

    ``PAPER`` uses log f(x) - log f(y); ``LEGACY`` uses the NGD-style
    log f(x) - log f(x, y).
    """

    PAPER = "paper"
    LEGACY = "legacy"

    def __str__(self):
        return self.value


def _count(value, name):
    if isinstance(value, bool):
        raise InvalidCounts(f"{name} must be an integer, got {value!r}")
    try:
        return operator.index(value)
    except TypeError:
        raise InvalidCounts(f"{name} must be an integer, got {value!r}") from None


@dataclass(frozen=True)
class PairCounts:
    """Document counts for one pair: f(x), f(y), f(x AND y) and corpus size M."""

    f_x: int
    f_y: int
    f_xy: int
    m: int

    def __post_init__(self):
        for name in ("f_x", "f_y", "f_xy", "m"):
            object.__setattr__(self, name, _count(getattr(self, name), name))
        if self.m < 1:
            raise InvalidCounts(f"corpus size must be >= 1, got {self.m}")
        if min(self.f_x, self.f_y, self.f_xy) < 0:
            raise InvalidCounts(f"counts must be non-negative: {self}")
        if max(self.f_x, self.f_y) > self.m:
            raise InvalidCounts(
                f"occurrence exceeds corpus size: f_x={self.f_x}, f_y={self.f_y}, m={self.m}"
            )

    @property
    def inconsistent(self) -> bool:
        """True when f(x, y) > min(f(x), f(y)), which only estimates can produce."""
        return self.f_xy > min(self.f_x, self.f_y)

    def swapped(self) -> "PairCounts":
        return PairCounts(self.f_y, self.f_x, self.f_xy, self.m)

    def scaled(self, k: int) -> "PairCounts":
        return PairCounts(self.f_x * k, self.f_y * k, self.f_xy * k, self.m * k)


@dataclass(frozen=True)
class MeasureParams:
    rho: float = DEFAULT_RHO
    mu1: float = 1.0
    mu2: float = 0.0
    variant: Variant = Variant.PAPER

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        rho, mu1, mu2 = float(self.rho), float(self.mu1), float(self.mu2)
        if not 0.0 <= rho <= 1.0:
            raise InvalidParams(f"rho must lie in [0, 1], got {self.rho}")
        if not (math.isfinite(mu1) and mu1 > 0.0):
            raise InvalidParams(f"mu1 must be a positive finite number, got {self.mu1}")
        if not (math.isfinite(mu2) and mu2 >= 0.0):
            raise InvalidParams(f"mu2 must be a non-negative finite number, got {self.mu2}")
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "mu1", mu1)
        object.__setattr__(self, "mu2", mu2)


@dataclass(frozen=True)
class ScoreReport:
    """One scored pair.  ``counts`` is oriented so that ``counts.f_x >= counts.f_y``."""

    x: Optional[str]
    y: Optional[str]
    counts: PairCounts
    params: MeasureParams
    pmi: float
    spread: float
    component_pmi: float
    component_spread: float
    pming: float
    flags: frozenset = field(default_factory=frozenset)

    @property
    def distance(self) -> float:
        return self.pming

    @property
    def proximity(self) -> float:
        return 1.0 - self.pming

    def with_flags(self, *extra: str) -> "ScoreReport":
        return replace(self, flags=self.flags | frozenset(extra))


def _require_occurrences(counts):
    if counts.f_x == 0 or counts.f_y == 0:
        raise UndefinedForZeroOccurrence(
            f"term with zero occurrences (f_x={counts.f_x}, f_y={counts.f_y})"
        )


def pmi(counts: PairCounts, *, log: LogFn = math.log) -> float:
    """log(f_xy * M / (f_x * f_y)); ``-inf`` when the terms never co-occur."""
    _require_occurrences(counts)
    if counts.f_xy == 0:
        return -math.inf
    # Integer products keep the ratio correctly rounded and order independent.
    return log((counts.f_xy * counts.m) / (counts.f_x * counts.f_y))


def spread_term(
    counts: PairCounts, variant: Variant = Variant.PAPER, *, log: LogFn = math.log
) -> float:
    """Second-component fraction before division by mu2.

    paper:  (log f_max - log f_min) / (log M - log f_min)
    legacy: (log f_max - log f_xy)  / (log M - log f_min), ``inf`` if f_xy = 0
    """
    _require_occurrences(counts)
    variant = Variant(variant)
    f_max, f_min = max(counts.f_x, counts.f_y), min(counts.f_x, counts.f_y)
    if f_min == counts.m:
        raise SingularDenominator(f"rarer term matches all {counts.m} documents")
    denominator = log(counts.m / f_min)
    if variant is Variant.PAPER:
        return log(f_max / f_min) / denominator
    if counts.f_xy == 0:
        return math.inf
    return log(f_max / counts.f_xy) / denominator


def _orient(counts, x, y):
    """Order the pair so the more frequent term comes first; ties go by term text."""
    if counts.f_x < counts.f_y or (
        counts.f_x == counts.f_y and x is not None and y is not None and y < x
    ):
        return counts.swapped(), y, x
    return counts, x, y


def pming_pair(
    counts: PairCounts,
    params: MeasureParams,
    x: Optional[str] = None,
    y: Optional[str] = None,
    *,
    log: LogFn = math.log,
) -> ScoreReport:
    counts, x, y = _orient(counts, x, y)
    flags = set()
    if counts.inconsistent:
        flags.add(INCONSISTENT_COUNTS)

    pmi_value = pmi(counts, log=log)
    spread = spread_term(counts, params.variant, log=log)

    if pmi_value == -math.inf:
        component_pmi = 1.0
        flags.add(ZERO_COOCCURRENCE)
    else:
        raw = 1.0 - pmi_value / params.mu1
        component_pmi = min(max(raw, 0.0), 1.0)
        if component_pmi != raw:
            flags.add(CLAMPED_PMI)

    if params.mu2 == 0.0:
        component_spread = 0.0
        flags.add(DEGENERATE_SPREAD)
    else:
        raw = spread / params.mu2
        component_spread = min(max(raw, 0.0), 1.0)
        if component_spread != raw:
            flags.add(CLAMPED_SPREAD)

    rho = params.rho
    value = rho * component_pmi + (1.0 - rho) * component_spread
    return ScoreReport(
        x=x,
        y=y,
        counts=counts,
        params=params,
        pmi=pmi_value,
        spread=spread,
        component_pmi=component_pmi,
        component_spread=component_spread,
        pming=value,
        flags=frozenset(flags),
    )
