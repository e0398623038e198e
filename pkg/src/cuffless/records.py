"""Core measurement record types shared by every pipeline stage."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .exceptions import RecordValidationError

FloatArray = NDArray[np.float64]

# Minimum record duration, in seconds, for feature extraction eligibility.
MIN_EXTRACTION_DURATION_S = 10.0


class VisitDay(str, Enum):
    """Measurement visit relative to the calibration day D."""

    D = "D"
    D7 = "D7"
    D14 = "D14"
    D21 = "D21"

    @property
    def ordinal(self) -> int:
        """Chronological position of the visit (D first)."""
        return _VISIT_ORDER[self]

    @classmethod
    def parse(cls, value: str | VisitDay) -> VisitDay:
        """Return the visit matching `value`.

        Raises:
            RecordValidationError: If `value` is not one of D, D7, D14, D21.
        """
        if isinstance(value, VisitDay):
            return value
        try:
            return cls(str(value).strip().upper())
        except ValueError:
            allowed = ", ".join(v.value for v in cls)
            raise RecordValidationError(
                f"Unknown visit_day '{value}'. Expected one of: {allowed}."
            ) from None


_VISIT_ORDER = {VisitDay.D: 0, VisitDay.D7: 1, VisitDay.D14: 2, VisitDay.D21: 3}


Gender = Literal["male", "female"]


@dataclass(frozen=True)
class UserProfile:
    """Subject characteristics rendered into user-level prompts.

    Args:
        age_years: Age in years.
        gender: Either "male" or "female".
        height_cm: Height in centimetres.
        weight_kg: Weight in kilograms.
        hypertension_history: Whether the subject has a history of hypertension.
    """

    age_years: float
    gender: Gender
    height_cm: float
    weight_kg: float
    hypertension_history: bool

    def __post_init__(self) -> None:
        gender = str(self.gender).strip().lower()
        if gender not in ("male", "female"):
            raise RecordValidationError(
                f"gender must be 'male' or 'female', got '{self.gender}'."
            )
        object.__setattr__(self, "gender", gender)

        if not math.isfinite(self.age_years) or self.age_years < 0:
            raise RecordValidationError(
                f"age_years must be finite and non-negative, got {self.age_years}."
            )
        for name in ("height_cm", "weight_kg"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise RecordValidationError(
                    f"{name} must be finite and positive, got {value}."
                )

    def as_inputs(self) -> tuple[float, float, float, float, float]:
        """Numeric encoding used as regression inputs."""
        return (
            float(self.age_years),
            1.0 if self.gender == "female" else 0.0,
            float(self.height_cm),
            float(self.weight_kg),
            1.0 if self.hypertension_history else 0.0,
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "age_years": self.age_years,
            "gender": self.gender,
            "height_cm": self.height_cm,
            "weight_kg": self.weight_kg,
            "hypertension_history": self.hypertension_history,
        }


def _as_signal(values: ArrayLike, name: str, label: str) -> FloatArray:
    try:
        array = np.array(values, dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise RecordValidationError(
            f"Record '{label}': {name} must contain only numbers ({e})."
        ) from e
    if array.ndim != 1:
        raise RecordValidationError(
            f"Record '{label}': {name} must be one-dimensional, got shape {array.shape}."
        )
    if not np.all(np.isfinite(array)):
        raise RecordValidationError(f"Record '{label}': {name} contains non-finite values.")
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class SignalRecord:
    """One synchronized ECG/PPG measurement session.

    Sample arrays are copied and frozen on construction, so a record can be
    shared across threads.

    Args:
        subject_id: Opaque subject identifier.
        visit_day: Visit of the session.
        sampling_rate_hz: Common sampling rate of both channels.
        ecg: ECG samples (arbitrary amplitude units).
        ppg: PPG samples (arbitrary amplitude units).
        ref_sbp_mmhg: Reference systolic pressure.
        ref_dbp_mmhg: Reference diastolic pressure.

    Raises:
        RecordValidationError: If channel lengths differ, the sampling rate is
            not positive or the reference reading violates SBP > DBP > 0.
    """

    subject_id: str
    visit_day: VisitDay
    sampling_rate_hz: float
    ecg: FloatArray
    ppg: FloatArray
    ref_sbp_mmhg: float
    ref_dbp_mmhg: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "subject_id", str(self.subject_id))
        object.__setattr__(self, "visit_day", VisitDay.parse(self.visit_day))
        label = self.label

        if not math.isfinite(self.sampling_rate_hz) or self.sampling_rate_hz <= 0:
            raise RecordValidationError(
                f"Record '{label}': sampling_rate_hz must be positive, "
                f"got {self.sampling_rate_hz}."
            )
        object.__setattr__(self, "ecg", _as_signal(self.ecg, "ecg", label))
        object.__setattr__(self, "ppg", _as_signal(self.ppg, "ppg", label))
        if self.ecg.shape != self.ppg.shape:
            raise RecordValidationError(
                f"Record '{label}' has {self.ecg.size} ECG samples but "
                f"{self.ppg.size} PPG samples.",
                suggestions=["ECG and PPG must be sampled synchronously"],
            )
        if not (self.ref_sbp_mmhg > self.ref_dbp_mmhg > 0):
            raise RecordValidationError(
                f"Record '{label}': reference reading {self.ref_sbp_mmhg}/"
                f"{self.ref_dbp_mmhg} mmHg violates SBP > DBP > 0."
            )

    @property
    def label(self) -> str:
        """Human-readable record identity, e.g. "S001/D7"."""
        return f"{self.subject_id}/{VisitDay.parse(self.visit_day).value}"

    @property
    def key(self) -> tuple[str, int]:
        """Sort key: subject id, then chronological visit."""
        return (self.subject_id, self.visit_day.ordinal)

    @property
    def n_samples(self) -> int:
        return int(self.ecg.size)

    @property
    def duration_s(self) -> float:
        return self.n_samples / self.sampling_rate_hz

    @property
    def is_extractable(self) -> bool:
        """True if the record is long enough for feature extraction."""
        return self.duration_s >= MIN_EXTRACTION_DURATION_S


def record_sort_key(subject_id: str, visit_day: VisitDay | str) -> tuple[str, int]:
    """Deterministic ordering key shared by records, features and prompts."""
    return (subject_id, VisitDay.parse(visit_day).ordinal)


def sort_records(records: list[SignalRecord]) -> list[SignalRecord]:
    """Return `records` sorted by subject id, then chronological visit."""
    return sorted(records, key=lambda r: r.key)
