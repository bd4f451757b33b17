"""Exact rational helpers.

Epsilon parameters arrive as floats typed by humans (0.1, 0.25, 1/3).
Counting formulas like ceil((1 - eps) * n) must not misround on float
noise (e.g. (1 - 0.1) * 100 == 90.00000000000001), so epsilons are
snapped to nearby small-denominator rationals before any ceiling.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

_SNAP_DENOMINATOR = 10**9


def exact_frac(x) -> Fraction:
    """Return x as an exact Fraction, snapping floats to denominator <= 1e9."""
    if isinstance(x, Rational):
        return Fraction(x)
    return Fraction(x).limit_denominator(_SNAP_DENOMINATOR)


def ceil_frac(x) -> int:
    """Ceiling of an exact rational (or rational-snapped) value."""
    return math.ceil(exact_frac(x))


def kept_count(eps, total: int) -> int:
    """ceil((1 - eps) * total): the guaranteed 'at least' side of a deletion bound."""
    return ceil_frac((1 - exact_frac(eps)) * total)
