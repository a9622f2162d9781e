"""Shared CSV/number formatting helpers.

All CSV output uses 17 significant digits with a ``.`` decimal separator so
files are locale-independent and floats round-trip bit-exactly.
"""

from __future__ import annotations

import math


def fmt_float(x: float) -> str:
    """Format a float with 17 significant digits (round-trip safe)."""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return f"{x:.17g}"
