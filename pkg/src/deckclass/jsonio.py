"""Canonical JSON serialization helpers (deterministic, exact rationals)."""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import ParseError

SCHEMA = "deckclass/1"


def rat_str(x):
    """Canonical rational string: 'p' for integers, 'p/q' otherwise."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rat(s):
    try:
        if isinstance(s, int):
            return Fraction(s)
        return Fraction(str(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {s!r}: {exc}") from exc


def dumps(obj):
    """Deterministic JSON: sorted keys, no whitespace variance, UTF-8 kept."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
