"""Basal blood pressure and calibration of free estimates."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from ..exceptions import CalibrationError
from .conversions import BPReading

DEFAULT_ALPHA = 0.3


@dataclass(frozen=True)
class BasalBP:
    """A subject's calibration anchor: the mean of its day-D readings.

    Args:
        base_sbp_mmhg: Mean day-D systolic pressure.
        base_dbp_mmhg: Mean day-D diastolic pressure.
        n_day_d: Number of day-D readings averaged.
    """

    base_sbp_mmhg: float
    base_dbp_mmhg: float
    n_day_d: int = 1

    def __post_init__(self) -> None:
        if self.n_day_d < 1:
            raise CalibrationError(f"n_day_d must be positive, got {self.n_day_d}.")
        if not self.base_sbp_mmhg > self.base_dbp_mmhg > 0:
            raise CalibrationError(
                f"Basal BP {self.base_sbp_mmhg}/{self.base_dbp_mmhg} mmHg "
                "violates SBP > DBP > 0."
            )

    def as_reading(self) -> BPReading:
        return BPReading(self.base_sbp_mmhg, self.base_dbp_mmhg)


def compute_basal(day_d_readings: Sequence[BPReading]) -> BasalBP:
    """Component-wise mean of the day-D readings.

    Raises:
        CalibrationError: If there are no readings.
    """
    if not day_d_readings:
        raise CalibrationError("Basal BP needs at least one day-D reading.")
    n = len(day_d_readings)
    return BasalBP(
        base_sbp_mmhg=math.fsum(r.sbp_mmhg for r in day_d_readings) / n,
        base_dbp_mmhg=math.fsum(r.dbp_mmhg for r in day_d_readings) / n,
        n_day_d=n,
    )


def check_alpha(alpha: float) -> float:
    """Return `alpha` if it lies in [0, 1]."""
    if not (math.isfinite(alpha) and 0.0 <= alpha <= 1.0):
        raise CalibrationError(f"alpha must be in [0, 1], got {alpha}.")
    return float(alpha)


def _blend(free: float, base: float, alpha: float) -> float:
    # free * alpha + base * (1 - alpha), anchored on base so that free == base
    # and alpha == 0 both return base bit-exactly.
    return base + alpha * (free - base)


def calibrate(free: BPReading, base: BasalBP, alpha: float = DEFAULT_ALPHA) -> BPReading:
    """Blend a free estimate with basal BP.

    SBP_cal = SBP_free * alpha + BaseSBP * (1 - alpha), and likewise for DBP.

    Raises:
        CalibrationError: If alpha is outside [0, 1].
    """
    a = check_alpha(alpha)
    return BPReading(
        sbp_mmhg=_blend(free.sbp_mmhg, base.base_sbp_mmhg, a),
        dbp_mmhg=_blend(free.dbp_mmhg, base.base_dbp_mmhg, a),
    )


def zero_baseline(base: BasalBP) -> BPReading:
    """Estimate that assumes no change from the basal reading."""
    return base.as_reading()
