from dataclasses import replace

import numpy as np
import pytest

from cuffless.exceptions import CufflessValidationError
from cuffless.ingest.quality import (
    QualityReason,
    QualityReport,
    QualityThresholds,
    clipped_fraction,
    longest_flat_run,
    screen_quality,
)
from cuffless.records import SignalRecord
from cuffless.ingest.synthetic import SyntheticConfig, synthesize_record
from cuffless.waveform.fiducials import (
    BeatFiducials,
    detect_beat_fiducials,
    detect_r_peaks,
)
from cuffless.waveform.filtering import filter_record

FS = 100.0


def _beat(r: int) -> BeatFiducials:
    return BeatFiducials(
        r=r,
        ppg_s=r + 10,
        ppg_m=r + 15,
        ppg_p=r + 20,
        ppg_n=r + 40,
        ppg_v=r + 80,
        vppg_s=r + 10,
        vppg_p=r + 15,
        vppg_v=r + 30,
        appg_s=r + 10,
        appg_p=r + 12,
        appg_v=r + 18,
    )


def _record(ecg=None, ppg=None, n=2000):
    t = np.arange(n) / FS
    return SignalRecord(
        subject_id="S001",
        visit_day="D",
        sampling_rate_hz=FS,
        ecg=np.sin(2 * np.pi * 1.1 * t) if ecg is None else ecg,
        ppg=np.cos(2 * np.pi * 0.9 * t) + 0.01 * t if ppg is None else ppg,
        ref_sbp_mmhg=120.0,
        ref_dbp_mmhg=80.0,
    )


@pytest.fixture
def beats():
    return [_beat(r) for r in range(0, 1200, 80)]


class TestHelpers:
    def test_longest_flat_run(self):
        x = np.array([0.0, 1.0, 1.0, 1.0, 2.0, 2.0, 3.0])
        assert longest_flat_run(x, 0.0) == 3

    def test_no_flat_run(self):
        assert longest_flat_run(np.arange(5.0), 0.0) == 1

    def test_clipped_fraction_counts_both_extremes(self):
        x = np.array([0.0, 0.0, 0.5, 1.0, 0.3, 0.2, 0.1, 0.4, 0.6, 1.0])
        assert clipped_fraction(x) == pytest.approx(0.4)

    def test_constant_signal_is_not_clipped(self):
        assert clipped_fraction(np.ones(50)) == 0.0


class TestScreenQuality:
    def test_accepts_clean_record(self, beats):
        report = screen_quality(_record(), beats)
        assert report.accepted
        assert report.reasons == ()
        assert report.beat_count == len(beats)

    def test_accepts_detected_synthetic_beats(self, synthetic_pair):
        record, truth = synthetic_pair
        bundle = filter_record(record)
        r_peaks = detect_r_peaks(bundle.ecg_f, record.sampling_rate_hz)
        detection = detect_beat_fiducials(bundle, r_peaks)
        report = screen_quality(record, detection.beats)
        assert report.accepted
        assert report.beat_count == len(truth.beats)

    def test_accepts_noisy_synthetic_record(self):
        record, _ = synthesize_record(
            SyntheticConfig(duration_s=30.0, noise_std=0.02, seed=4)
        )
        bundle = filter_record(record)
        r_peaks = detect_r_peaks(bundle.ecg_f, record.sampling_rate_hz)
        detection = detect_beat_fiducials(bundle, r_peaks)
        assert screen_quality(record, detection.beats).accepted

    def test_flatline(self, beats):
        ecg = np.sin(np.arange(2000) / 7.0)
        ecg[100:400] = 0.25
        report = screen_quality(_record(ecg=ecg), beats)
        assert not report.accepted
        assert report.reason_codes == ["flatline"]

    def test_flatline_at_the_limit_is_tolerated(self, beats):
        ecg = np.sin(np.arange(2000) / 7.0)
        ecg[100:301] = 0.25
        assert screen_quality(_record(ecg=ecg), beats).accepted

    def test_clipping(self, beats):
        ppg = np.cos(np.arange(2000) / 9.0)
        ppg = np.clip(ppg, -2.0, 0.9)
        report = screen_quality(_record(ppg=ppg), beats)
        assert QualityReason.CLIPPING in report.reasons

    def test_too_few_beats(self, beats):
        report = screen_quality(_record(), beats[:9])
        assert report.reasons == (QualityReason.BEAT_COUNT_TOO_LOW,)

    def test_custom_beat_threshold(self, beats):
        thresholds = QualityThresholds(min_beats=5)
        assert screen_quality(_record(), beats[:5], thresholds).accepted

    def test_fiducial_order_violation(self, beats):
        broken = replace(_beat(1300), ppg_n=1310)
        report = screen_quality(_record(), [*beats, broken])
        assert report.reasons == (QualityReason.FIDUCIAL_ORDER_VIOLATION,)

    def test_reasons_accumulate(self):
        report = screen_quality(_record(ecg=np.zeros(2000)), [])
        assert report.reason_codes == ["flatline", "beat-count-too-low"]


class TestQualityTypes:
    def test_accepted_report_has_no_reasons(self):
        with pytest.raises(CufflessValidationError):
            QualityReport(accepted=True, reasons=(QualityReason.FLATLINE,))

    @pytest.mark.parametrize(
        "kwargs",
        [{"min_beats": 0}, {"max_flatline_s": 0.0}, {"max_clipped_fraction": 1.5}],
    )
    def test_invalid_thresholds(self, kwargs):
        with pytest.raises(CufflessValidationError):
            QualityThresholds(**kwargs)
