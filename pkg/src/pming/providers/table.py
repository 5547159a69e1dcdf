"""Static count tables loaded from JSON.

File layout::

    {"M": 1000,
     "occurrence": {"a": 100, "b": 100},
     "cooccurrence": [{"a": "a", "b": "b", "count": 50}]}

Terms are normalized at load.  Pairs missing from ``cooccurrence`` count 0.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Dict, Mapping, Tuple

from ..errors import InvalidTable, ParseError
from .text import TermLike, as_term, normalize


def _pair_key(a: str, b: str) -> Tuple[str, str]:
    return (a, b) if a <= b else (b, a)


def _int_field(value, location):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"expected an integer, got {value!r}", location)
    if value < 0:
        raise ParseError(f"expected a non-negative integer, got {value}", location)
    return value


def _term_key(text, location):
    if not isinstance(text, str):
        raise ParseError(f"expected a term string, got {text!r}", location)
    tokens = normalize(text)
    if not tokens:
        raise ParseError(f"term {text!r} contains no word tokens", location)
    return " ".join(tokens)


class CountTable:
    """Provider answering exactly the stored counts."""

    def __init__(self, m: int, occurrence: Mapping[str, int],
                 cooccurrence: Mapping[Tuple[str, str], int], provider_id: str = "table"):
        self.m = m
        self._occurrence = dict(occurrence)
        self._cooccurrence = dict(cooccurrence)
        self.provider_id = provider_id

    def __repr__(self):
        return f"CountTable(M={self.m}, terms={len(self._occurrence)}, pairs={len(self._cooccurrence)})"

    @property
    def terms(self):
        return sorted(self._occurrence)

    def corpus_size(self) -> int:
        return self.m

    def occurrence(self, term: TermLike) -> int:
        return self._occurrence.get(as_term(term).key, 0)

    def cooccurrence(self, x: TermLike, y: TermLike) -> int:
        kx, ky = as_term(x).key, as_term(y).key
        if kx == ky:
            return self._occurrence.get(kx, 0)
        return self._cooccurrence.get(_pair_key(kx, ky), 0)

    @classmethod
    def from_mapping(cls, data, provider_id: str = "table", source: str = "<table>") -> "CountTable":
        """Validate a decoded table document.

        Structural problems raise :class:`ParseError` naming the field;
        count relations that no exact source could produce raise
        :class:`InvalidTable`.
        """
        if not isinstance(data, dict):
            raise ParseError("top level must be an object", source)
        for key in ("M", "occurrence", "cooccurrence"):
            if key not in data:
                raise ParseError(f"missing field {key!r}", source)
        m = _int_field(data["M"], f"{source}: M")
        if m < 1:
            raise ParseError("M must be >= 1", f"{source}: M")

        occ_data = data["occurrence"]
        if not isinstance(occ_data, dict):
            raise ParseError("expected an object", f"{source}: occurrence")
        occurrence: Dict[str, int] = {}
        for raw, value in occ_data.items():
            loc = f"{source}: occurrence[{raw!r}]"
            key = _term_key(raw, loc)
            count = _int_field(value, loc)
            if occurrence.get(key, count) != count:
                raise InvalidTable(f"{loc}: normalizes to {key!r} which already has count {occurrence[key]}")
            occurrence[key] = count
        if occurrence and max(occurrence.values()) > m:
            worst = max(occurrence, key=occurrence.get)
            raise InvalidTable(f"{source}: occurrence of {worst!r} ({occurrence[worst]}) exceeds M ({m})")

        cooc_data = data["cooccurrence"]
        if not isinstance(cooc_data, list):
            raise ParseError("expected an array", f"{source}: cooccurrence")
        cooccurrence: Dict[Tuple[str, str], int] = {}
        for i, entry in enumerate(cooc_data):
            loc = f"{source}: cooccurrence[{i}]"
            if not isinstance(entry, dict):
                raise ParseError("expected an object", loc)
            for field in ("a", "b", "count"):
                if field not in entry:
                    raise ParseError(f"missing field {field!r}", loc)
            a = _term_key(entry["a"], f"{loc}.a")
            b = _term_key(entry["b"], f"{loc}.b")
            count = _int_field(entry["count"], f"{loc}.count")
            bound = min(occurrence.get(a, 0), occurrence.get(b, 0))
            if count > bound:
                raise InvalidTable(f"{loc}: count {count} exceeds min occurrence {bound} of {a!r}, {b!r}")
            if a == b:
                if count != occurrence[a]:
                    raise InvalidTable(f"{loc}: self co-occurrence must equal occurrence of {a!r}")
                continue
            key = _pair_key(a, b)
            if cooccurrence.get(key, count) != count:
                raise InvalidTable(f"{loc}: conflicting count for pair {key}")
            cooccurrence[key] = count
        return cls(m, occurrence, cooccurrence, provider_id=provider_id)

    def to_json(self) -> dict:
        return {
            "M": self.m,
            "occurrence": dict(sorted(self._occurrence.items())),
            "cooccurrence": [
                {"a": a, "b": b, "count": c} for (a, b), c in sorted(self._cooccurrence.items())
            ],
        }


def load_count_table(path) -> CountTable:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"not valid UTF-8 ({exc.reason})", f"{path}: byte {exc.start}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"{path}: line {exc.lineno} column {exc.colno}") from exc
    return CountTable.from_mapping(data, provider_id=f"table:{path.name}", source=str(path))


__all__ = ["CountTable", "load_count_table"]
