"""ECG R-peak and beat-by-beat PPG landmark detection."""

from __future__ import annotations

import logging
from dataclasses import dataclass, fields

import numpy as np
from numpy.typing import ArrayLike
from scipy import signal as scipy_signal

from ..exceptions import DetectionError, SignalTooShortError
from ..records import FloatArray
from .filtering import FilteredBundle, derive

logger = logging.getLogger("cuffless.waveform")

REFRACTORY_S = 0.25
REFINE_HALF_WINDOW_S = 0.05
INTEGRATION_WINDOW_S = 0.15
THRESHOLD_LEARNING_S = 2.0
# Two beats at 30 bpm.
MIN_R_PEAK_DURATION_S = 4.0
# Fraction of the p-to-v span searched for the rising edge after the notch.
NOTCH_SEARCH_FRACTION = 2.0 / 3.0


@dataclass(frozen=True)
class BeatFiducials:
    """Landmark sample indices of one beat.

    PPG s is the onset valley, m the maximum-slope point, p the systolic peak,
    n the dicrotic notch and v the end valley (the next beat's s). VPPG and
    APPG landmarks follow the same s/p/v naming on their own waveforms.
    """

    r: int
    ppg_s: int
    ppg_m: int
    ppg_p: int
    ppg_n: int
    ppg_v: int
    vppg_s: int
    vppg_p: int
    vppg_v: int
    appg_s: int
    appg_p: int
    appg_v: int

    def is_ordered(self, n_samples: int | None = None) -> bool:
        """True if the beat satisfies every ordering and bounds invariant.

        Args:
            n_samples: Length of the arrays the indices point into. Bounds are
                only checked when given.
        """
        chain = (
            self.r < self.ppg_s <= self.ppg_m < self.ppg_p < self.ppg_n < self.ppg_v
        )
        per_signal = (
            self.ppg_s < self.ppg_p < self.ppg_v
            and self.vppg_s < self.vppg_p < self.vppg_v
            and self.appg_s < self.appg_p < self.appg_v
        )
        if not (chain and per_signal):
            return False
        if n_samples is None:
            return True
        return all(0 <= getattr(self, f.name) < n_samples for f in fields(self))

    def shifted(self, offset: int) -> BeatFiducials:
        """Copy with every index moved by `offset` samples."""
        return BeatFiducials(**{f.name: getattr(self, f.name) + offset for f in fields(self)})


@dataclass(frozen=True)
class FiducialDetection:
    """Beats retained by `detect_beat_fiducials` and the accounting of the rest.

    Args:
        beats: Retained beats in temporal order.
        dropped: Beats rejected for a degenerate or out-of-order landmark.
        discarded: Edge beats whose search window ran past the record end.
    """

    beats: tuple[BeatFiducials, ...]
    dropped: int = 0
    discarded: int = 0

    def __len__(self) -> int:
        return len(self.beats)


def _samples(seconds: float, fs: float) -> int:
    return max(1, int(round(seconds * fs)))


def detect_r_peaks(ecg_f: ArrayLike, fs: float) -> list[int]:
    """Locate ECG R peaks with a Pan-Tompkins style adaptive threshold.

    The squared first derivative is integrated over a 150 ms moving window.
    Integrator peaks at least 250 ms apart are classified as signal or noise
    against running estimates (SPKI / NPKI) initialised on the first two
    seconds. Signal peaks are refined to the ECG maximum within +/-50 ms, and
    long gaps are searched back at half the threshold.

    Args:
        ecg_f: Filtered ECG.
        fs: Sampling rate in Hz.

    Returns:
        Strictly increasing R-peak indices at least 250 ms apart.

    Raises:
        SignalTooShortError: If the input is shorter than two beats at 30 bpm.
        DetectionError: If no peaks are found (for example a flatline).
    """
    x = np.asarray(ecg_f, dtype=np.float64)
    minimum = int(np.ceil(MIN_R_PEAK_DURATION_S * fs))
    if x.ndim != 1 or x.size < minimum:
        raise SignalTooShortError(
            f"R-peak detection needs at least {MIN_R_PEAK_DURATION_S} s "
            f"({minimum} samples), got {x.size} samples."
        )

    scale = float(np.max(np.abs(x - np.median(x))))
    if not np.isfinite(scale) or scale <= 1e-12:
        raise DetectionError("No R peaks found: the ECG is flat.")
    normalized = (x - np.median(x)) / scale

    refractory = _samples(REFRACTORY_S, fs)
    half_window = _samples(REFINE_HALF_WINDOW_S, fs)
    width = _samples(INTEGRATION_WINDOW_S, fs)

    squared = derive(normalized, fs, "first") ** 2
    integrated = np.convolve(squared, np.ones(width) / width, mode="same")
    candidates, _ = scipy_signal.find_peaks(integrated, distance=refractory)

    learning = integrated[: _samples(THRESHOLD_LEARNING_S, fs)]
    spki = 0.25 * float(np.max(learning))
    npki = 0.5 * float(np.mean(learning))
    threshold = npki + 0.25 * (spki - npki)

    def refine(index: int) -> int:
        lo = max(0, index - half_window)
        hi = min(x.size, index + half_window + 1)
        return lo + int(np.argmax(x[lo:hi]))

    accepted: list[int] = []
    rr_history: list[int] = []
    for raw_candidate in candidates:
        candidate = int(raw_candidate)
        value = float(integrated[candidate])

        # Search back for a missed beat when the gap is unusually long.
        if accepted and len(rr_history) >= 2:
            mean_rr = float(np.mean(rr_history[-8:]))
            if candidate - accepted[-1] > 1.66 * mean_rr:
                missed = [
                    int(c)
                    for c in candidates
                    if accepted[-1] + refractory <= c <= candidate - refractory
                    and integrated[c] > 0.5 * threshold
                ]
                if missed:
                    best = max(missed, key=lambda c: (integrated[c], -c))
                    peak = refine(best)
                    if peak - accepted[-1] >= refractory:
                        rr_history.append(peak - accepted[-1])
                        accepted.append(peak)
                        spki = 0.25 * float(integrated[best]) + 0.75 * spki

        if value > threshold:
            peak = refine(candidate)
            if not accepted or peak - accepted[-1] >= refractory:
                if accepted:
                    rr_history.append(peak - accepted[-1])
                accepted.append(peak)
                spki = 0.125 * value + 0.875 * spki
            else:
                npki = 0.125 * value + 0.875 * npki
        else:
            npki = 0.125 * value + 0.875 * npki
        threshold = npki + 0.25 * (spki - npki)

    if not accepted:
        raise DetectionError("No R peaks found above the adaptive threshold.")
    logger.debug(f"Detected {len(accepted)} R peaks")
    return accepted


def _argmin(x: FloatArray, lo: int, hi: int) -> int | None:
    """Earliest index of the minimum of x[lo:hi], or None for an empty window."""
    if hi <= lo:
        return None
    return lo + int(np.argmin(x[lo:hi]))


def _argmax(x: FloatArray, lo: int, hi: int) -> int | None:
    """Earliest index of the maximum of x[lo:hi], or None for an empty window."""
    if hi <= lo:
        return None
    return lo + int(np.argmax(x[lo:hi]))


def _onset(ppg_f: FloatArray, r: int, rr: int) -> int | None:
    """PPG onset: minimum of ppg_f in (r, r + rr/2], required to be interior."""
    hi = r + rr // 2 + 1
    s = _argmin(ppg_f, r + 1, hi)
    if s is None or s == hi - 1:
        return None
    return s


def _locate_beat(bundle: FilteredBundle, r0: int, r1: int, rr_next: int) -> BeatFiducials | None:
    ppg_f, vppg, appg = bundle.ppg_f, bundle.vppg, bundle.appg

    s = _onset(ppg_f, r0, r1 - r0)
    v = _onset(ppg_f, r1, rr_next)
    if s is None or v is None:
        return None

    p = _argmax(ppg_f, s + 1, r1)
    if p is None:
        return None
    m = _argmax(vppg, s + 1, p)
    if m is None:
        return None

    # The notch is the valley before the steepest rise of the dicrotic wave.
    rise_hi = p + int((v - p) * NOTCH_SEARCH_FRACTION) + 1
    u = _argmax(vppg, p + 1, min(rise_hi, v))
    if u is None or vppg[u] <= 0:
        return None
    n = _argmin(ppg_f, p + 1, u + 1)
    if n is None or n >= u:
        return None

    vppg_v = _argmin(vppg, p + 1, n)
    appg_p = _argmax(appg, s + 1, m)
    appg_v = _argmin(appg, m + 1, p)
    if vppg_v is None or appg_p is None or appg_v is None:
        return None

    return BeatFiducials(
        r=r0,
        ppg_s=s,
        ppg_m=m,
        ppg_p=p,
        ppg_n=n,
        ppg_v=v,
        vppg_s=s,
        vppg_p=m,
        vppg_v=vppg_v,
        appg_s=s,
        appg_p=appg_p,
        appg_v=appg_v,
    )


def detect_beat_fiducials(
    bundle: FilteredBundle, r_peaks: list[int] | tuple[int, ...]
) -> FiducialDetection:
    """Detect PPG, VPPG and APPG landmarks for every R-to-R interval.

    For the beat starting at R peak r with next peak r':

    - s is the ppg_f minimum in (r, r + RR/2]; v is the next beat's s.
    - p is the ppg_f maximum in (s, r').
    - m is the VPPG maximum in (s, p).
    - n is the ppg_f minimum between p and the steepest rise of the dicrotic
      wave (the VPPG maximum over the first two thirds of (p, v)).
    - VPPG uses s, m and the VPPG minimum in (p, n); APPG uses s, its
      maximum in (s, m) and its minimum in (m, p).

    Ties go to the earliest index. A beat whose onset search window runs past
    the record end is discarded; a beat with a missing or out-of-order
    landmark is dropped.

    Args:
        bundle: Filtered record.
        r_peaks: Increasing R-peak indices into the bundle.

    Returns:
        The retained beats with dropped and discarded counts.

    Raises:
        DetectionError: If fewer than two R peaks are given.
    """
    peaks = [int(r) for r in r_peaks]
    if len(peaks) < 2:
        raise DetectionError(
            f"Beat detection needs at least 2 R peaks, got {len(peaks)}."
        )

    n_samples = bundle.n_samples
    beats: list[BeatFiducials] = []
    dropped = 0
    discarded = 0
    for i in range(len(peaks) - 1):
        r0, r1 = peaks[i], peaks[i + 1]
        rr_next = peaks[i + 2] - r1 if i + 2 < len(peaks) else r1 - r0
        if r1 + rr_next // 2 >= n_samples:
            discarded += 1
            continue
        beat = _locate_beat(bundle, r0, r1, rr_next)
        if beat is None or not beat.is_ordered(n_samples):
            dropped += 1
            continue
        beats.append(beat)

    logger.debug(
        f"Retained {len(beats)} beats ({dropped} dropped, {discarded} discarded)"
    )
    return FiducialDetection(beats=tuple(beats), dropped=dropped, discarded=discarded)
