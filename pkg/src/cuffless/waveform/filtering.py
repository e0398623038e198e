"""Zero-phase low-pass filtering and PPG derivatives."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike
from scipy import signal as scipy_signal

from ..exceptions import FilterDesignError, SignalError, SignalTooShortError
from ..records import FloatArray, SignalRecord

DEFAULT_ECG_CUTOFF_HZ = 40.0
DEFAULT_PPG_CUTOFF_HZ = 20.0
FILTER_ORDER = 4

# Central differences need two neighbours on each side to leave an interior.
MIN_DERIVATIVE_LENGTH = 5


@dataclass(frozen=True, eq=False)
class FilteredBundle:
    """Filtered channels of one record plus the PPG derivatives.

    Args:
        ecg_f: Low-passed ECG.
        ppg_f: Low-passed PPG.
        vppg: First derivative of `ppg_f` (units per second).
        appg: Second derivative of `ppg_f` (units per second squared).
        sampling_rate_hz: Sampling rate shared by all four arrays.
    """

    ecg_f: FloatArray
    ppg_f: FloatArray
    vppg: FloatArray
    appg: FloatArray
    sampling_rate_hz: float

    def __post_init__(self) -> None:
        sizes = {a.size for a in (self.ecg_f, self.ppg_f, self.vppg, self.appg)}
        if len(sizes) != 1:
            raise SignalError(
                f"Bundle arrays must have equal length, got sizes {sorted(sizes)}."
            )
        if self.sampling_rate_hz <= 0:
            raise SignalError("sampling_rate_hz must be positive.")

    @property
    def n_samples(self) -> int:
        return int(self.ppg_f.size)


def min_filter_length(order: int = FILTER_ORDER) -> int:
    """Shortest input `lowpass_filter` accepts for a given order.

    Forward-backward filtering pads each end by three times the length of the
    second-order-section state, and the input must be longer than that pad.
    """
    n_sections = (order + 1) // 2
    return 3 * (2 * n_sections + 1) + 1


def lowpass_filter(
    samples: ArrayLike,
    fs: float,
    cutoff_hz: float,
    *,
    order: int = FILTER_ORDER,
) -> FloatArray:
    """Butterworth low-pass applied forward and backward.

    The forward-backward pass cancels the phase response, so landmark timing
    is preserved and the DC gain is exactly one.

    Args:
        samples: One-dimensional input signal.
        fs: Sampling rate in Hz.
        cutoff_hz: -3 dB cutoff of the single-pass filter, in Hz.
        order: Butterworth order of the single pass.

    Returns:
        Filtered signal with the same length as the input.

    Raises:
        FilterDesignError: If the cutoff is not strictly inside (0, fs/2).
        SignalTooShortError: If the input is shorter than the filter warm-up.
    """
    if fs <= 0:
        raise FilterDesignError(f"Sampling rate must be positive, got {fs}.")
    nyquist = fs / 2.0
    if not 0 < cutoff_hz < nyquist:
        raise FilterDesignError(
            f"Cutoff {cutoff_hz} Hz must lie in (0, {nyquist}) Hz for fs={fs} Hz.",
            suggestions=["Lower the cutoff or resample the signal at a higher rate"],
        )

    x = np.asarray(samples, dtype=np.float64)
    minimum = min_filter_length(order)
    if x.ndim != 1 or x.size < minimum:
        raise SignalTooShortError(
            f"Low-pass filtering needs at least {minimum} samples, got {x.size}."
        )

    sos = scipy_signal.butter(order, cutoff_hz, btype="lowpass", fs=fs, output="sos")
    return np.asarray(scipy_signal.sosfiltfilt(sos, x), dtype=np.float64)


def derive(
    samples: ArrayLike,
    fs: float,
    order: Literal["first", "second"] = "first",
) -> FloatArray:
    """Central-difference derivative scaled to units per second.

    The first and last samples repeat their interior neighbours so the output
    keeps the input length.

    Raises:
        SignalTooShortError: If the input has fewer than five samples.
        SignalError: If `order` is not "first" or "second".
    """
    x = np.asarray(samples, dtype=np.float64)
    if x.ndim != 1 or x.size < MIN_DERIVATIVE_LENGTH:
        raise SignalTooShortError(
            f"Derivative needs at least {MIN_DERIVATIVE_LENGTH} samples, got {x.size}."
        )

    if order == "first":
        interior = (x[2:] - x[:-2]) * (fs / 2.0)
    elif order == "second":
        interior = np.diff(x, 2) * (fs * fs)
    else:
        raise SignalError(f"Derivative order must be 'first' or 'second', got {order!r}.")
    return np.pad(interior, 1, mode="edge")


def filter_record(
    record: SignalRecord,
    *,
    ecg_cutoff_hz: float = DEFAULT_ECG_CUTOFF_HZ,
    ppg_cutoff_hz: float = DEFAULT_PPG_CUTOFF_HZ,
) -> FilteredBundle:
    """Filter both channels of `record` and derive the PPG twice."""
    fs = record.sampling_rate_hz
    ppg_f = lowpass_filter(record.ppg, fs, ppg_cutoff_hz)
    return FilteredBundle(
        ecg_f=lowpass_filter(record.ecg, fs, ecg_cutoff_hz),
        ppg_f=ppg_f,
        vppg=derive(ppg_f, fs, "first"),
        appg=derive(ppg_f, fs, "second"),
        sampling_rate_hz=fs,
    )
