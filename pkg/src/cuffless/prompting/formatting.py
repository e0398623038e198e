"""Numeric formatting for prompt text."""

from __future__ import annotations

import math
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable

from ..exceptions import PromptError

_FEATURE_QUANTUM = Decimal("0.01")
_READING_QUANTUM = Decimal("0.1")


def format_value(value: float) -> str:
    """Round half away from zero to 2 decimals and trim trailing zeros.

    Rounding works on the shortest repr of the float, so 0.125 becomes
    "0.13" rather than following its binary expansion.

    Raises:
        PromptError: If `value` is not finite.
    """
    if not math.isfinite(value):
        raise PromptError(f"Cannot format non-finite feature value {value}.")
    rounded = Decimal(repr(float(value))).quantize(_FEATURE_QUANTUM, rounding=ROUND_HALF_UP)
    if rounded == 0:
        return "0"
    text = f"{rounded:f}"
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    return text


def format_feature_list(values: Iterable[float]) -> str:
    """Bracketed, comma-space separated list of formatted values.

    Example:
        >>> format_feature_list([0.16, 0.51, 0.100])
        '[0.16, 0.51, 0.1]'

    Raises:
        PromptError: If `values` is empty or holds a non-finite value.
    """
    items = [format_value(v) for v in values]
    if not items:
        raise PromptError("Cannot format an empty feature list.")
    return "[" + ", ".join(items) + "]"


def format_reading(value: float) -> str:
    """One-decimal rendering of a pressure value, e.g. 86 -> "86.0"."""
    if not math.isfinite(value):
        raise PromptError(f"Cannot format non-finite pressure {value}.")
    rounded = Decimal(repr(float(value))).quantize(_READING_QUANTUM, rounding=ROUND_HALF_UP)
    if rounded == 0:
        rounded = abs(rounded)
    return f"{rounded:f}"
