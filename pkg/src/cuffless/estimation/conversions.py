"""Blood pressure readings and MAP/PP conversions."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..exceptions import InvalidReadingError


@dataclass(frozen=True)
class BPReading:
    """A systolic/diastolic pair in mmHg.

    Raises:
        InvalidReadingError: Unless SBP > DBP > 0 and both are finite.
    """

    sbp_mmhg: float
    dbp_mmhg: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.sbp_mmhg) and math.isfinite(self.dbp_mmhg)):
            raise InvalidReadingError(
                f"Reading {self.sbp_mmhg}/{self.dbp_mmhg} mmHg is not finite."
            )
        if not self.sbp_mmhg > self.dbp_mmhg > 0:
            raise InvalidReadingError(
                f"Reading {self.sbp_mmhg}/{self.dbp_mmhg} mmHg violates SBP > DBP > 0."
            )


def map_pp_from_reading(reading: BPReading) -> tuple[float, float]:
    """Mean arterial pressure (SBP + 2 DBP) / 3 and pulse pressure SBP - DBP."""
    sbp, dbp = reading.sbp_mmhg, reading.dbp_mmhg
    return (sbp + 2.0 * dbp) / 3.0, sbp - dbp


def reading_from_map_pp(map_mmhg: float, pp_mmhg: float) -> BPReading:
    """Inverse conversion: SBP = MAP + 2 PP / 3 and DBP = MAP - PP / 3.

    Raises:
        InvalidReadingError: If PP is not positive or the resulting DBP is not.
    """
    if not pp_mmhg > 0:
        raise InvalidReadingError(f"Pulse pressure must be positive, got {pp_mmhg}.")
    dbp = map_mmhg - pp_mmhg / 3.0
    if not dbp > 0:
        raise InvalidReadingError(
            f"MAP {map_mmhg} and PP {pp_mmhg} give a non-positive DBP ({dbp})."
        )
    return BPReading(sbp_mmhg=map_mmhg + 2.0 * pp_mmhg / 3.0, dbp_mmhg=dbp)
