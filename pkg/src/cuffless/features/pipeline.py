"""Record-level feature extraction: filter, detect, screen, measure, average."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from ..exceptions import (
    BeatFeatureError,
    CufflessError,
    DetectionError,
    RecordRejectedError,
    SignalTooShortError,
)
from ..ingest.quality import (
    QualityReason,
    QualityReport,
    QualityThresholds,
    screen_quality,
)
from ..records import SignalRecord, UserProfile
from ..waveform.filtering import (
    DEFAULT_ECG_CUTOFF_HZ,
    DEFAULT_PPG_CUTOFF_HZ,
    filter_record,
)
from ..waveform.fiducials import detect_beat_fiducials, detect_r_peaks
from .aggregate import aggregate_features
from .beat import compute_beat_features
from .vectors import BeatFeatureVector, FeatureVector, RecordMeta

logger = logging.getLogger("cuffless.features")


@dataclass(frozen=True)
class ExtractionSettings:
    """Settings of the extraction pipeline.

    Args:
        ecg_cutoff_hz: ECG low-pass cutoff.
        ppg_cutoff_hz: PPG low-pass cutoff.
        thresholds: Quality screening thresholds.
    """

    ecg_cutoff_hz: float = DEFAULT_ECG_CUTOFF_HZ
    ppg_cutoff_hz: float = DEFAULT_PPG_CUTOFF_HZ
    thresholds: QualityThresholds = field(default_factory=QualityThresholds)


def extract_record_features(
    record: SignalRecord,
    user: UserProfile | None = None,
    settings: ExtractionSettings | None = None,
) -> FeatureVector:
    """Run the full feature pipeline on one record.

    Beats whose features are undefined (for example a zero onset amplitude)
    are skipped and do not count towards the beat total.

    Raises:
        RecordRejectedError: If the record fails quality screening. The error
            carries the `QualityReport`.
        SignalError: If filtering cannot be applied (record far too short).
    """
    settings = settings or ExtractionSettings()
    bundle = filter_record(
        record,
        ecg_cutoff_hz=settings.ecg_cutoff_hz,
        ppg_cutoff_hz=settings.ppg_cutoff_hz,
    )

    try:
        r_peaks = detect_r_peaks(bundle.ecg_f, record.sampling_rate_hz)
        beats = detect_beat_fiducials(bundle, r_peaks).beats
    except (DetectionError, SignalTooShortError) as e:
        logger.debug(f"{record.label}: beat detection failed ({e})")
        beats = ()

    report = screen_quality(record, beats, settings.thresholds)
    if report.accepted and not record.is_extractable:
        report = QualityReport(accepted=False, reasons=(), beat_count=len(beats))
    if not report.accepted:
        raise RecordRejectedError(_rejection_message(record, report), report=report)

    features: list[BeatFeatureVector] = []
    for beat in beats:
        try:
            features.append(compute_beat_features(bundle, beat))
        except BeatFeatureError as e:
            logger.debug(f"{record.label}: skipping beat ({e})")
    if len(features) < settings.thresholds.min_beats:
        report = QualityReport(
            accepted=False,
            reasons=(QualityReason.BEAT_COUNT_TOO_LOW,),
            beat_count=len(features),
        )
        raise RecordRejectedError(_rejection_message(record, report), report=report)

    meta = RecordMeta(
        subject_id=record.subject_id,
        visit_day=record.visit_day,
        ref_sbp_mmhg=record.ref_sbp_mmhg,
        ref_dbp_mmhg=record.ref_dbp_mmhg,
        user=user,
    )
    return aggregate_features(features, meta)


def _rejection_message(record: SignalRecord, report: QualityReport) -> str:
    if report.reasons:
        detail = ", ".join(report.reason_codes)
    elif not record.is_extractable:
        detail = f"duration {record.duration_s:.1f} s is below the 10 s minimum"
    else:
        detail = f"only {report.beat_count} beats with defined features"
    return f"Record '{record.label}' rejected: {detail}."


@dataclass(frozen=True)
class ExtractionFault:
    """A record that produced no feature vector."""

    subject_id: str
    visit_day: str
    message: str


@dataclass(frozen=True)
class ExtractionResult:
    """Feature vectors of a batch plus the records that failed."""

    vectors: tuple[FeatureVector, ...]
    faults: tuple[ExtractionFault, ...]


def extract_features(
    records: Sequence[SignalRecord],
    profiles: Mapping[str, UserProfile] | None = None,
    *,
    settings: ExtractionSettings | None = None,
    jobs: int = 1,
) -> ExtractionResult:
    """Extract features from many records; per-record failures never abort.

    Args:
        records: Records to process.
        profiles: Subject profiles keyed by subject id.
        settings: Pipeline settings.
        jobs: Number of worker threads.

    Returns:
        Vectors and faults, both in input order.
    """
    profiles = profiles or {}

    def run(record: SignalRecord) -> FeatureVector | ExtractionFault:
        try:
            return extract_record_features(
                record, profiles.get(record.subject_id), settings
            )
        except CufflessError as e:
            logger.warning(str(e))
            return ExtractionFault(record.subject_id, record.visit_day.value, str(e))

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(run, records))
    else:
        outcomes = [run(record) for record in records]

    vectors = tuple(o for o in outcomes if isinstance(o, FeatureVector))
    faults = tuple(o for o in outcomes if isinstance(o, ExtractionFault))
    logger.info(
        f"Extracted features for {len(vectors)} of {len(records)} records "
        f"({len(faults)} rejected)"
    )
    return ExtractionResult(vectors=vectors, faults=faults)
