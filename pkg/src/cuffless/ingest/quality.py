"""Signal quality screening of measurement records."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from ..exceptions import CufflessValidationError
from ..records import FloatArray, SignalRecord
from ..waveform.fiducials import BeatFiducials


class QualityReason(str, Enum):
    """Rejection codes reported by `screen_quality`."""

    FLATLINE = "flatline"
    CLIPPING = "clipping"
    BEAT_COUNT_TOO_LOW = "beat-count-too-low"
    FIDUCIAL_ORDER_VIOLATION = "fiducial-order-violation"


@dataclass(frozen=True)
class QualityThresholds:
    """Acceptance thresholds for `screen_quality`.

    Args:
        min_beats: Minimum number of retained beats.
        max_flatline_s: Longest tolerated run of constant samples, in seconds.
        max_clipped_fraction: Fraction of samples allowed at the signal's
            extreme values.
        flatline_tolerance: Sample-to-sample change treated as constant.
    """

    min_beats: int = 10
    max_flatline_s: float = 2.0
    max_clipped_fraction: float = 0.01
    flatline_tolerance: float = 1e-9

    def __post_init__(self) -> None:
        if self.min_beats < 1:
            raise CufflessValidationError("min_beats must be at least 1.")
        if self.max_flatline_s <= 0:
            raise CufflessValidationError("max_flatline_s must be positive.")
        if not 0 < self.max_clipped_fraction <= 1:
            raise CufflessValidationError("max_clipped_fraction must be in (0, 1].")
        if self.flatline_tolerance < 0:
            raise CufflessValidationError("flatline_tolerance must be non-negative.")


@dataclass(frozen=True)
class QualityReport:
    """Outcome of quality screening.

    Args:
        accepted: True if the record passed every criterion.
        reasons: Rejection codes; empty for accepted records.
        beat_count: Number of beats screened.
    """

    accepted: bool
    reasons: tuple[QualityReason, ...] = ()
    beat_count: int = 0

    def __post_init__(self) -> None:
        if self.accepted and self.reasons:
            raise CufflessValidationError("An accepted report cannot carry reasons.")

    @property
    def reason_codes(self) -> list[str]:
        return [reason.value for reason in self.reasons]


def longest_flat_run(samples: FloatArray, tolerance: float) -> int:
    """Length, in samples, of the longest run of constant samples."""
    if samples.size < 2:
        return int(samples.size)
    flat = np.abs(np.diff(samples)) <= tolerance
    if not flat.any():
        return 1
    padded = np.concatenate(([False], flat, [False])).astype(np.int8)
    edges = np.flatnonzero(np.diff(padded))
    runs = edges[1::2] - edges[::2]
    return int(runs.max()) + 1


def clipped_fraction(samples: FloatArray) -> float:
    """Fraction of samples sitting at the signal's global maximum or minimum.

    A constant signal is reported as unclipped; flatline screening covers it.
    """
    if samples.size == 0:
        return 0.0
    high, low = samples.max(), samples.min()
    if high == low:
        return 0.0
    return float(np.count_nonzero((samples == high) | (samples == low))) / samples.size


def screen_quality(
    record: SignalRecord,
    fiducials: Sequence[BeatFiducials],
    thresholds: QualityThresholds | None = None,
) -> QualityReport:
    """Screen a record and its detected beats.

    A record is accepted iff it has at least `min_beats` beats, neither channel
    holds a constant run longer than `max_flatline_s`, each channel has fewer
    than `max_clipped_fraction` samples at its extremes, and every beat
    satisfies the landmark ordering invariant. Screening reports and never
    raises.

    Args:
        record: The screened record.
        fiducials: Beats detected on this record.
        thresholds: Acceptance thresholds. Defaults to `QualityThresholds()`.

    Returns:
        The screening report.
    """
    limits = thresholds or QualityThresholds()
    reasons: list[QualityReason] = []

    max_run = int(np.floor(limits.max_flatline_s * record.sampling_rate_hz)) + 1
    channels = (record.ecg, record.ppg)
    if any(longest_flat_run(x, limits.flatline_tolerance) > max_run for x in channels):
        reasons.append(QualityReason.FLATLINE)
    if any(clipped_fraction(x) >= limits.max_clipped_fraction for x in channels):
        reasons.append(QualityReason.CLIPPING)
    if len(fiducials) < limits.min_beats:
        reasons.append(QualityReason.BEAT_COUNT_TOO_LOW)
    if not all(beat.is_ordered(record.n_samples) for beat in fiducials):
        reasons.append(QualityReason.FIDUCIAL_ORDER_VIOLATION)

    return QualityReport(
        accepted=not reasons, reasons=tuple(reasons), beat_count=len(fiducials)
    )
