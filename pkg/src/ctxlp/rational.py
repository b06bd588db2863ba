"""Exact rational probability literals.

All probabilities and expectations in this package are `fractions.Fraction`
values, which already guarantee lowest terms, a positive denominator, and
exact arithmetic. This module only adds the strict literal syntax used by
system documents: "a/b" with decimal integers, or a bare "0"/"1", with an
optional leading minus so that invalid (negative) probabilities can still be
represented in a document and reported by validation instead of dying at
parse time.
"""

from __future__ import annotations

import re
from fractions import Fraction

_LITERAL = re.compile(r"^-?(?:[0-9]+/[1-9][0-9]*|[01])$")


class RationalSyntaxError(ValueError):
    """A probability literal does not match the documented syntax."""


def parse_rational(text: str) -> Fraction:
    """Parse a strict "a/b" (or "0"/"1") literal into a Fraction.

    Decimal notation ("0.5"), exponents, whitespace and zero denominators
    are all rejected.
    """
    if not isinstance(text, str) or not _LITERAL.match(text):
        raise RationalSyntaxError(f"malformed rational literal: {text!r}")
    return Fraction(text)


def format_rational(value: Fraction) -> str:
    """Render a Fraction in canonical lowest-terms form ("0", "1", "-1/4", "3/8")."""
    return str(Fraction(value))
