"""Feature vector types and the 31-feature catalogue."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from ..exceptions import BeatFeatureError, FeatureError
from ..records import UserProfile, VisitDay, record_sort_key

N_FEATURES = 31

_WAVEFORMS = ("ppg", "vppg", "appg")

# Numbered 1-31 in this order.
FEATURE_NAMES: tuple[str, ...] = (
    "ptt_rv",
    "ptt_rm",
    "ptt_rp",
    *(f"asc_time_{w}" for w in _WAVEFORMS),
    *(f"asc_slope_{w}" for w in _WAVEFORMS),
    *(f"asc_area_{w}" for w in _WAVEFORMS),
    *(f"asc_intensity_diff_{w}" for w in _WAVEFORMS),
    *(f"desc_time_{w}" for w in _WAVEFORMS),
    *(f"desc_slope_{w}" for w in _WAVEFORMS),
    *(f"desc_area_{w}" for w in _WAVEFORMS),
    *(f"desc_intensity_diff_{w}" for w in _WAVEFORMS),
    "lasi",
    "pulse_width",
    "pulse_rate",
    "pulse_intensity_rate",
)

# Features measured as time spans, required to be positive.
TIME_SPAN_FEATURES: frozenset[int] = frozenset(
    {1, 2, 3, 4, 5, 6, 16, 17, 18, 28, 29, 30}
)
PULSE_INTENSITY_RATE = 31


def feature_number(name: str) -> int:
    """1-based number of the feature called `name`."""
    try:
        return FEATURE_NAMES.index(name) + 1
    except ValueError:
        raise FeatureError(f"Unknown feature '{name}'.") from None


def _check_values(values: Sequence[float], error: type[FeatureError]) -> tuple[float, ...]:
    out = tuple(float(v) for v in values)
    if len(out) != N_FEATURES:
        raise error(f"Expected {N_FEATURES} feature values, got {len(out)}.")
    bad = [FEATURE_NAMES[i] for i, v in enumerate(out) if not math.isfinite(v)]
    if bad:
        raise error(f"Non-finite feature value(s): {', '.join(bad)}.")
    return out


@dataclass(frozen=True)
class BeatFeatureVector:
    """The 31 features of a single beat, in catalogue order.

    Raises:
        BeatFeatureError: If a value is non-finite, a time span is not
            positive or the pulse intensity rate is not positive.
    """

    values: tuple[float, ...]

    def __post_init__(self) -> None:
        values = _check_values(self.values, BeatFeatureError)
        for number in sorted(TIME_SPAN_FEATURES):
            if values[number - 1] <= 0:
                raise BeatFeatureError(
                    f"Time span '{FEATURE_NAMES[number - 1]}' must be positive, "
                    f"got {values[number - 1]}."
                )
        if values[PULSE_INTENSITY_RATE - 1] <= 0:
            raise BeatFeatureError("pulse_intensity_rate must be positive.")
        object.__setattr__(self, "values", values)

    def __getitem__(self, number: int) -> float:
        """Feature by its 1-based catalogue number."""
        if not 1 <= number <= N_FEATURES:
            raise FeatureError(f"Feature number must be in 1..{N_FEATURES}, got {number}.")
        return self.values[number - 1]

    def as_dict(self) -> dict[str, float]:
        return dict(zip(FEATURE_NAMES, self.values))


@dataclass(frozen=True)
class FeatureVector:
    """Beat-averaged features of one record with its identity and references.

    Args:
        values: 31 beat-averaged feature values in catalogue order.
        beat_count: Number of beats averaged.
        subject_id: Subject of the record.
        visit_day: Visit of the record.
        ref_sbp_mmhg: Reference systolic pressure.
        ref_dbp_mmhg: Reference diastolic pressure.
        user: Subject profile, when known.
    """

    values: tuple[float, ...]
    beat_count: int
    subject_id: str
    visit_day: VisitDay
    ref_sbp_mmhg: float
    ref_dbp_mmhg: float
    user: UserProfile | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _check_values(self.values, FeatureError))
        object.__setattr__(self, "visit_day", VisitDay.parse(self.visit_day))
        if self.beat_count < 1:
            raise FeatureError(f"beat_count must be positive, got {self.beat_count}.")

    def __getitem__(self, number: int) -> float:
        """Feature by its 1-based catalogue number."""
        if not 1 <= number <= N_FEATURES:
            raise FeatureError(f"Feature number must be in 1..{N_FEATURES}, got {number}.")
        return self.values[number - 1]

    @property
    def label(self) -> str:
        return f"{self.subject_id}/{self.visit_day.value}"

    @property
    def key(self) -> tuple[str, int]:
        return record_sort_key(self.subject_id, self.visit_day)


@dataclass(frozen=True)
class RecordMeta:
    """Identity and reference data attached to aggregated features."""

    subject_id: str
    visit_day: VisitDay
    ref_sbp_mmhg: float
    ref_dbp_mmhg: float
    user: UserProfile | None = None
