"""Filtering, derivatives and fiducial detection."""

from .filtering import (
    DEFAULT_ECG_CUTOFF_HZ,
    DEFAULT_PPG_CUTOFF_HZ,
    FilteredBundle,
    derive,
    filter_record,
    lowpass_filter,
)
from .fiducials import (
    BeatFiducials,
    FiducialDetection,
    detect_beat_fiducials,
    detect_r_peaks,
)

__all__ = [
    "DEFAULT_ECG_CUTOFF_HZ",
    "DEFAULT_PPG_CUTOFF_HZ",
    "FilteredBundle",
    "BeatFiducials",
    "FiducialDetection",
    "derive",
    "filter_record",
    "lowpass_filter",
    "detect_r_peaks",
    "detect_beat_fiducials",
]
