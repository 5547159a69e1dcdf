"""Term normalization: NFKC, case folding, Unicode word segmentation."""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass
from typing import Tuple, Union

from ..errors import InvalidTerm

# A word runs through any combining marks that follow word characters.
_MARKS = "\u0300-\u036f\u1ab0-\u1aff\u1dc0-\u1dff\u20d0-\u20ff\ufe20-\ufe2f"
_WORD = re.compile(rf"\w[\w{_MARKS}]*")


def tokenize(text: str) -> list:
    """Split ``text`` into normalized word tokens (no stemming, no stop words)."""
    return _WORD.findall(unicodedata.normalize("NFKC", text).casefold())


def normalize(text: str) -> Tuple[str, ...]:
    """Tokens of ``text``, iterated to a fixed point.

    Case folding can emit characters that NFKC recomposes, so one pass is
    not always idempotent.  Two passes suffice in practice; the loop bound
    is a guard.
    """
    tokens = tuple(tokenize(text))
    for _ in range(4):
        again = tuple(tokenize(" ".join(tokens)))
        if again == tokens:
            break
        tokens = again
    return tokens


@dataclass(frozen=True)
class Term:
    tokens: Tuple[str, ...]
    display: str

    @classmethod
    def parse(cls, text: str) -> "Term":
        tokens = normalize(text)
        if not tokens:
            raise InvalidTerm(f"term {text!r} contains no word tokens")
        return cls(tokens, text)

    @property
    def key(self) -> str:
        """Normalized text, used for lookups, ordering and output."""
        return " ".join(self.tokens)

    def __str__(self):
        return self.key


TermLike = Union[str, Term]


def as_term(value: TermLike) -> Term:
    return value if isinstance(value, Term) else Term.parse(value)
