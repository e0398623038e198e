"""Per-beat computation of the 31 features."""

from __future__ import annotations

from scipy.integrate import trapezoid

from ..exceptions import BeatFeatureError
from ..records import FloatArray
from ..waveform.filtering import FilteredBundle
from ..waveform.fiducials import BeatFiducials
from .vectors import BeatFeatureVector


def _segment(
    w: FloatArray, start: int, end: int, fs: float
) -> tuple[float, float, float, float]:
    """Time span, slope, area and intensity change of w from start to end."""
    span = (end - start) / fs
    change = float(w[end] - w[start])
    area = float(trapezoid(w[start : end + 1], dx=1.0 / fs))
    return span, change / span, area, change


def compute_beat_features(bundle: FilteredBundle, beat: BeatFiducials) -> BeatFeatureVector:
    """Compute the 31 features of one beat.

    Time spans are index differences over fs, slopes are amplitude changes
    over their span, areas are trapezoidal integrals of the waveform between
    the two landmarks and intensity differences are amplitude differences.
    Ascending intensity differences are w[p] - w[s] and descending ones
    w[p] - w[v]; descending slopes are (w[v] - w[p]) over the descent time.

    Args:
        bundle: Filtered record the beat was detected on.
        beat: Landmarks of the beat.

    Returns:
        The beat's features in catalogue order.

    Raises:
        BeatFeatureError: If the beat is out of order, the PPG onset amplitude
            is zero or a resulting feature is invalid.
    """
    if not beat.is_ordered(bundle.n_samples):
        raise BeatFeatureError(f"Beat at R={beat.r} violates landmark ordering.")

    fs = bundle.sampling_rate_hz
    ppg = bundle.ppg_f
    landmarks = (
        (ppg, beat.ppg_s, beat.ppg_p, beat.ppg_v),
        (bundle.vppg, beat.vppg_s, beat.vppg_p, beat.vppg_v),
        (bundle.appg, beat.appg_s, beat.appg_p, beat.appg_v),
    )
    ascents = [_segment(w, s, p, fs) for w, s, p, _ in landmarks]
    descents = [_segment(w, p, v, fs) for w, _, p, v in landmarks]

    onset = float(ppg[beat.ppg_s])
    if onset == 0.0:
        raise BeatFeatureError(
            f"Beat at R={beat.r}: PPG amplitude at s is zero, "
            "pulse intensity rate is undefined."
        )

    values = [
        (beat.ppg_s - beat.r) / fs,
        (beat.ppg_m - beat.r) / fs,
        (beat.ppg_p - beat.r) / fs,
        *(a[0] for a in ascents),
        *(a[1] for a in ascents),
        *(a[2] for a in ascents),
        *(a[3] for a in ascents),
        *(d[0] for d in descents),
        *(d[1] for d in descents),
        *(d[2] for d in descents),
        *(-d[3] for d in descents),
        (beat.ppg_n - beat.ppg_p) / fs,
        (beat.ppg_n - beat.ppg_m) / fs,
        (beat.ppg_v - beat.ppg_s) / fs,
        float(ppg[beat.ppg_p]) / onset,
    ]
    return BeatFeatureVector(values=tuple(values))
