"""Synthetic ECG/PPG records with exact ground-truth landmarks.

The ECG is a train of Gaussian R spikes on a slow baseline wander. The PPG is
a superposition of pulses, one per beat, each with a raised-cosine ascent, a
critically damped exponential descent and a Gaussian dicrotic wave. Pulses
start `ptt_ms` after their R spike, so the true onset, maximum-slope point and
peak of every beat are known analytically.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from ..exceptions import CufflessValidationError
from ..records import FloatArray, SignalRecord, UserProfile, VisitDay

logger = logging.getLogger("cuffless.ingest")

# Pulse shape, as fractions of the beat period.
RISE_FRACTION = 0.18
DECAY_FRACTION = 0.15
DICROTIC_CENTER_FRACTION = 0.5
DICROTIC_WIDTH_FRACTION = 0.06
DICROTIC_AMPLITUDE = 0.3

ECG_SPIKE_WIDTH_S = 0.010
ECG_WANDER_HZ = 0.2
# Virtual beats before the record start put the PPG in steady state.
WARMUP_BEATS = 3


@dataclass(frozen=True)
class SyntheticConfig:
    """Parameters of one synthetic record.

    Args:
        heart_rate_bpm: Constant heart rate, in [30, 220].
        duration_s: Record duration in seconds.
        sampling_rate_hz: Sampling rate of both channels.
        ptt_ms: Delay from each R spike to the PPG onset, shorter than a beat.
        noise_std: Standard deviation of additive Gaussian noise on both channels.
        seed: Seed of the noise generator.
        pulse_amplitude: Height of the PPG systolic pulse.
        baseline: Constant PPG offset; keeps onset amplitudes positive.
        ecg_wander: Amplitude of the ECG baseline wander.
        subject_id: Subject identity stamped on the record.
        visit_day: Visit stamped on the record.
        ref_sbp_mmhg: Reference systolic pressure stamped on the record.
        ref_dbp_mmhg: Reference diastolic pressure stamped on the record.
    """

    heart_rate_bpm: float = 72.0
    duration_s: float = 10.0
    sampling_rate_hz: float = 1000.0
    ptt_ms: float = 200.0
    noise_std: float = 0.0
    seed: int = 0
    pulse_amplitude: float = 1.0
    baseline: float = 0.5
    ecg_wander: float = 0.05
    subject_id: str = "SYN000"
    visit_day: VisitDay = VisitDay.D
    ref_sbp_mmhg: float = 120.0
    ref_dbp_mmhg: float = 80.0

    def __post_init__(self) -> None:
        if not 30.0 <= self.heart_rate_bpm <= 220.0:
            raise CufflessValidationError(
                f"heart_rate_bpm must be in [30, 220], got {self.heart_rate_bpm}."
            )
        for name in ("duration_s", "sampling_rate_hz", "ptt_ms", "pulse_amplitude"):
            if getattr(self, name) <= 0:
                raise CufflessValidationError(
                    f"{name} must be positive, got {getattr(self, name)}."
                )
        if self.noise_std < 0:
            raise CufflessValidationError(
                f"noise_std must be non-negative, got {self.noise_std}."
            )
        if self.ptt_ms >= self.period_s * 1000.0:
            raise CufflessValidationError(
                f"ptt_ms ({self.ptt_ms}) must be shorter than the beat period "
                f"({self.period_s * 1000.0:.1f} ms)."
            )
        object.__setattr__(self, "visit_day", VisitDay.parse(self.visit_day))

    @property
    def period_s(self) -> float:
        return 60.0 / self.heart_rate_bpm

    @property
    def n_samples(self) -> int:
        return int(round(self.duration_s * self.sampling_rate_hz))


@dataclass(frozen=True)
class GroundTruthBeat:
    """Exact landmark indices of one synthetic beat."""

    r: int
    s: int
    m: int
    p: int
    n: int
    v: int


@dataclass(frozen=True)
class GroundTruth:
    """Ground truth of a synthetic record.

    Args:
        r_peaks: Every R spike inside the record.
        beats: Complete beats, i.e. those a detector can delineate: the next
            R spike and the next onset search window both lie inside the record.
    """

    r_peaks: tuple[int, ...]
    beats: tuple[GroundTruthBeat, ...]


def _r_index(k: int, period_samples: float) -> int:
    return int(round((k + 0.5) * period_samples))


def _pulse(tau: FloatArray, period_s: float, rise_s: float) -> FloatArray:
    """Unit pulse shape at times `tau` seconds after its onset."""
    decay_s = DECAY_FRACTION * period_s
    out = np.zeros_like(tau)

    ascent = (tau >= 0) & (tau < rise_s)
    out[ascent] = 0.5 * (1.0 - np.cos(np.pi * tau[ascent] / rise_s))

    descent = tau >= rise_s
    x = (tau[descent] - rise_s) / decay_s
    out[descent] = (1.0 + x) * np.exp(-x)

    center = DICROTIC_CENTER_FRACTION * period_s
    width = DICROTIC_WIDTH_FRACTION * period_s
    started = tau >= 0
    out[started] += DICROTIC_AMPLITUDE * np.exp(
        -((tau[started] - center) ** 2) / (2.0 * width * width)
    )
    return out


def synthesize_record(config: SyntheticConfig) -> tuple[SignalRecord, GroundTruth]:
    """Generate a record and the exact landmark indices of its beats.

    R spikes sit at round((k + 0.5) * T * fs) for beat period T. Each PPG onset
    s lies exactly round(ptt_ms * fs / 1000) samples after its R spike, the
    maximum-slope point m half-way up the ascent and the peak p at its top.
    The notch n is the minimum of the noiseless PPG between p and the centre
    of the dicrotic wave, and v is the onset of the following beat.

    Args:
        config: Generator parameters.

    Returns:
        The record and its ground truth. Identical configs give bit-identical
        records.
    """
    fs = config.sampling_rate_hz
    n_total = config.n_samples
    period_s = config.period_s
    period_samples = period_s * fs
    ptt_samples = int(round(config.ptt_ms * fs / 1000.0))
    rise_samples = max(2, int(round(RISE_FRACTION * period_samples)))
    rise_s = rise_samples / fs
    t = np.arange(n_total, dtype=np.float64) / fs

    r_peaks: list[int] = []
    k = 0
    while _r_index(k, period_samples) < n_total:
        r_peaks.append(_r_index(k, period_samples))
        k += 1

    # ECG: Gaussian spikes plus baseline wander.
    ecg = config.ecg_wander * np.sin(2.0 * np.pi * ECG_WANDER_HZ * t)
    spike_reach = int(np.ceil(6 * ECG_SPIKE_WIDTH_S * fs))
    for r in r_peaks:
        lo, hi = max(0, r - spike_reach), min(n_total, r + spike_reach + 1)
        ecg[lo:hi] += np.exp(-(((t[lo:hi] - r / fs) / ECG_SPIKE_WIDTH_S) ** 2) / 2.0)

    # PPG: overlapping pulses, including virtual beats outside the record.
    clean = np.full(n_total, config.baseline, dtype=np.float64)
    reach = int(np.ceil(6 * period_samples))
    for beat in range(-WARMUP_BEATS, len(r_peaks) + 1):
        onset = _r_index(beat, period_samples) + ptt_samples
        lo, hi = max(0, onset), min(n_total, onset + reach)
        if hi <= lo:
            continue
        tau = t[lo:hi] - onset / fs
        clean[lo:hi] += config.pulse_amplitude * _pulse(tau, period_s, rise_s)

    beats: list[GroundTruthBeat] = []
    notch_reach = int(round(DICROTIC_CENTER_FRACTION * period_samples))
    for i in range(len(r_peaks) - 1):
        r0, r1 = r_peaks[i], r_peaks[i + 1]
        rr_next = r_peaks[i + 2] - r1 if i + 2 < len(r_peaks) else r1 - r0
        if r1 + rr_next // 2 >= n_total:
            continue
        s = r0 + ptt_samples
        p = s + rise_samples
        n = p + 1 + int(np.argmin(clean[p + 1 : s + notch_reach + 1]))
        beats.append(
            GroundTruthBeat(
                r=r0, s=s, m=s + rise_samples // 2, p=p, n=n, v=r1 + ptt_samples
            )
        )

    rng = np.random.default_rng(config.seed)
    ecg_noise = rng.normal(0.0, config.noise_std, n_total)
    ppg_noise = rng.normal(0.0, config.noise_std, n_total)

    record = SignalRecord(
        subject_id=config.subject_id,
        visit_day=config.visit_day,
        sampling_rate_hz=fs,
        ecg=ecg + ecg_noise,
        ppg=clean + ppg_noise,
        ref_sbp_mmhg=config.ref_sbp_mmhg,
        ref_dbp_mmhg=config.ref_dbp_mmhg,
    )
    return record, GroundTruth(r_peaks=tuple(r_peaks), beats=tuple(beats))


@dataclass(frozen=True)
class SyntheticCohort:
    """Records and subject profiles of a synthetic cohort."""

    records: tuple[SignalRecord, ...]
    profiles: dict[str, UserProfile]


def synthesize_cohort(
    n_subjects: int,
    *,
    visits: tuple[VisitDay, ...] = tuple(VisitDay),
    duration_s: float = 120.0,
    sampling_rate_hz: float = 1000.0,
    noise_std: float = 0.0,
    seed: int = 0,
    sbp_law: tuple[float, float] = (100.0, 100.0),
    dbp_law: tuple[float, float] = (60.0, 60.0),
    bp_noise_std: float = 3.0,
    visit_ptt_std_ms: float = 25.0,
) -> SyntheticCohort:
    """Generate a multi-visit cohort whose reference BP follows the PTT.

    Each subject gets a profile, a resting heart rate and a baseline PTT. Every
    visit perturbs both, and its reference reading is

        SBP = a_s + b_s * PTT_s + e,   DBP = a_d + b_d * PTT_s + e'

    with PTT in seconds and Gaussian reading noise of `bp_noise_std` mmHg.

    Args:
        n_subjects: Number of subjects.
        visits: Visits recorded per subject.
        duration_s: Duration of every record.
        sampling_rate_hz: Sampling rate of every record.
        noise_std: Additive signal noise.
        seed: Cohort seed; every record is reproducible from it.
        sbp_law: Intercept and slope (mmHg, mmHg/s) of the SBP law.
        dbp_law: Intercept and slope of the DBP law.
        bp_noise_std: Reading noise in mmHg.
        visit_ptt_std_ms: Visit-to-visit PTT variability in milliseconds.

    Returns:
        The cohort records in subject/visit order and the subject profiles.
    """
    if n_subjects < 1:
        raise CufflessValidationError(f"n_subjects must be positive, got {n_subjects}.")

    width = max(3, len(str(n_subjects)))
    records: list[SignalRecord] = []
    profiles: dict[str, UserProfile] = {}
    for index in range(n_subjects):
        subject_id = f"S{index:0{width}d}"
        rng = np.random.default_rng([seed, index])

        gender = "female" if rng.random() < 0.5 else "male"
        height = float(rng.normal(162.0 if gender == "female" else 175.0, 7.0))
        profiles[subject_id] = UserProfile(
            age_years=float(rng.integers(20, 81)),
            gender=gender,
            height_cm=round(min(max(height, 140.0), 205.0), 1),
            weight_kg=round(float(rng.uniform(45.0, 100.0)), 1),
            hypertension_history=bool(rng.random() < 0.2),
        )
        base_hr = float(rng.uniform(60.0, 85.0))
        base_ptt_ms = float(rng.uniform(170.0, 240.0))

        for visit in sorted(visits, key=lambda v: v.ordinal):
            hr = float(np.clip(base_hr + rng.normal(0.0, 4.0), 50.0, 100.0))
            ptt_ms = float(
                np.clip(base_ptt_ms + rng.normal(0.0, visit_ptt_std_ms), 130.0, 270.0)
            )
            ptt_s = ptt_ms / 1000.0
            sbp = sbp_law[0] + sbp_law[1] * ptt_s + rng.normal(0.0, bp_noise_std)
            dbp = dbp_law[0] + dbp_law[1] * ptt_s + rng.normal(0.0, bp_noise_std)
            record, _ = synthesize_record(
                SyntheticConfig(
                    heart_rate_bpm=hr,
                    duration_s=duration_s,
                    sampling_rate_hz=sampling_rate_hz,
                    ptt_ms=ptt_ms,
                    noise_std=noise_std,
                    seed=int(rng.integers(0, 2**31 - 1)),
                    subject_id=subject_id,
                    visit_day=visit,
                    ref_sbp_mmhg=round(float(sbp), 1),
                    ref_dbp_mmhg=round(float(dbp), 1),
                )
            )
            records.append(record)

    logger.info(f"Synthesized {len(records)} records for {n_subjects} subjects")
    return SyntheticCohort(records=tuple(records), profiles=profiles)
