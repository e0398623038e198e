"""Parse MAP/PP estimates out of model replies."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from ..exceptions import ResponseParseError

_NUMBER = r"([-+]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][-+]?\d+)?|nan|inf)"
_MAP_PATTERN = re.compile(r"predicted_map\s*[:=]?\s*" + _NUMBER, re.IGNORECASE)
_PP_PATTERN = re.compile(r"predicted_pp\s*[:=]?\s*" + _NUMBER, re.IGNORECASE)
_STRICT_PATTERN = re.compile(
    r"Predicted_MAP: (\d+(?:\.\d+)?) mmHg, Predicted_PP: (\d+(?:\.\d+)?) mmHg\."
)


@dataclass(frozen=True)
class ParsedEstimate:
    """MAP and PP read from a model reply.

    Raises:
        ResponseParseError: If a value is non-finite or non-positive.
    """

    map_mmhg: float
    pp_mmhg: float

    def __post_init__(self) -> None:
        for name in ("map_mmhg", "pp_mmhg"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise ResponseParseError(
                    f"Parsed {name} must be finite and positive, got {value}.",
                    raw=f"{self.map_mmhg}/{self.pp_mmhg}",
                )


def _first_number(pattern: re.Pattern[str], text: str, key: str) -> float:
    match = pattern.search(text)
    if match is None:
        raise ResponseParseError(f"Response has no '{key}' value: {text!r}", raw=text)
    return float(match.group(1))


def parse_response(text: str, *, strict: bool = False) -> ParsedEstimate:
    """Extract MAP and PP from `text`.

    In lenient mode keys match case-insensitively anywhere in the text and
    the first number after each key is taken. Strict mode requires the exact
    tuning response phrasing.

    Raises:
        ResponseParseError: If a key is absent or a value is not a positive
            finite number. The error keeps the raw text.
    """
    if strict:
        match = _STRICT_PATTERN.fullmatch(text.strip())
        if match is None:
            raise ResponseParseError(
                f"Response does not match the strict format: {text!r}", raw=text
            )
        map_mmhg, pp_mmhg = float(match.group(1)), float(match.group(2))
    else:
        map_mmhg = _first_number(_MAP_PATTERN, text, "Predicted_MAP")
        pp_mmhg = _first_number(_PP_PATTERN, text, "Predicted_PP")

    try:
        return ParsedEstimate(map_mmhg=map_mmhg, pp_mmhg=pp_mmhg)
    except ResponseParseError as e:
        raise ResponseParseError(str(e), raw=text) from None
