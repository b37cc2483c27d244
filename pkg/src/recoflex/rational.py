"""Exact rational scalars: construction, parsing and canonical formatting.

All solver math runs on arbitrary-precision rationals so that set
containment and minimality tests are equality-sensitive with zero
tolerance.  gmpy2's mpq is used when available (same canonical reduced
form and str() format as fractions.Fraction, roughly 6x faster);
otherwise the stdlib Fraction is a drop-in.
"""

from __future__ import annotations

import re
from fractions import Fraction

try:
    from gmpy2 import mpq as Rat
except ImportError:  # pragma: no cover
    Rat = Fraction

ZERO = Rat(0)
ONE = Rat(1)

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


class RationalFormatError(ValueError):
    """Raised for malformed rational literals such as '3.5'."""


def rat(x, y=None) -> Rat:
    """Build a rational from ints, an existing rational, or both num/den."""
    if y is not None:
        return Rat(x) / Rat(y)
    if isinstance(x, float):
        raise RationalFormatError(f"refusing float {x!r}; use num/den form")
    return Rat(x)


def parse_rational(text) -> Rat:
    """Parse 'num/den' or a bare integer string/int; reject anything else."""
    if isinstance(text, int):
        return Rat(text)
    if not isinstance(text, str) or not _RATIONAL_RE.match(text.strip()):
        raise RationalFormatError(
            f"{text!r} is not a rational; use num/den form or an integer"
        )
    s = text.strip()
    if "/" in s:
        num, den = s.split("/")
        if int(den) == 0:
            raise RationalFormatError(f"zero denominator in {text!r}")
        return Rat(int(num)) / Rat(int(den))
    return Rat(int(s))


def format_rational(q):
    """Canonical JSON form: bare int when integral, else 'num/den'."""
    q = Rat(q)
    if q.denominator == 1:
        return int(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def as_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))
