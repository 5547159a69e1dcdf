"""Stable rendering of reals: 9 significant digits, infinities as strings."""

import math

SIG_DIGITS = 9


def round_sig(value: float) -> float:
    return float(format(value, f".{SIG_DIGITS}g"))


def json_real(value: float):
    """A JSON-ready value: rounded float, or ``"-inf"`` / ``"inf"`` / ``"nan"``."""
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "-inf" if value < 0 else "inf"
    return round_sig(value)


def text_real(value: float) -> str:
    rendered = json_real(value)
    return rendered if isinstance(rendered, str) else repr(rendered)
