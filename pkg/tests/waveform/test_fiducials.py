import numpy as np
import pytest

from cuffless.exceptions import DetectionError, SignalTooShortError
from cuffless.ingest.synthetic import SyntheticConfig, synthesize_record
from cuffless.waveform.fiducials import (
    BeatFiducials,
    detect_beat_fiducials,
    detect_r_peaks,
)
from cuffless.waveform.filtering import filter_record

# Landmark tolerances, in samples at 1 kHz.
R_TOLERANCE = 3
PPG_TOLERANCE = 10
NOTCH_TOLERANCE = 10


@pytest.fixture(scope="module")
def detection(synthetic_pair):
    record, truth = synthetic_pair
    bundle = filter_record(record)
    r_peaks = detect_r_peaks(bundle.ecg_f, record.sampling_rate_hz)
    return bundle, r_peaks, detect_beat_fiducials(bundle, r_peaks), truth


def _beat(**overrides):
    fields = dict(
        r=0,
        ppg_s=100,
        ppg_m=150,
        ppg_p=200,
        ppg_n=400,
        ppg_v=800,
        vppg_s=100,
        vppg_p=150,
        vppg_v=300,
        appg_s=100,
        appg_p=120,
        appg_v=180,
    )
    fields.update(overrides)
    return BeatFiducials(**fields)


class TestDetectRPeaks:
    def test_matches_ground_truth(self, detection):
        _, r_peaks, _, truth = detection
        assert len(r_peaks) == len(truth.r_peaks)
        offsets = np.abs(np.array(r_peaks) - np.array(truth.r_peaks))
        assert offsets.max() <= R_TOLERANCE

    def test_peaks_respect_refractory_period(self, detection):
        _, r_peaks, _, _ = detection
        assert np.all(np.diff(r_peaks) >= 250)

    def test_robust_to_moderate_noise(self):
        record, truth = synthesize_record(
            SyntheticConfig(duration_s=20.0, noise_std=0.02, seed=3)
        )
        r_peaks = detect_r_peaks(filter_record(record).ecg_f, record.sampling_rate_hz)
        assert len(r_peaks) == len(truth.r_peaks)

    def test_flat_ecg(self):
        with pytest.raises(DetectionError, match="flat"):
            detect_r_peaks(np.zeros(5000), 1000.0)

    def test_shorter_than_two_slow_beats(self):
        with pytest.raises(SignalTooShortError, match="4.0 s"):
            detect_r_peaks(np.zeros(3999), 1000.0)


class TestDetectBeatFiducials:
    def test_every_complete_beat_is_retained(self, detection):
        _, _, result, truth = detection
        assert result.dropped == 0
        assert len(result) == len(truth.beats)

    def test_landmarks_match_ground_truth(self, detection):
        _, _, result, truth = detection
        for found, expected in zip(result.beats, truth.beats):
            assert abs(found.r - expected.r) <= R_TOLERANCE
            assert abs(found.ppg_s - expected.s) <= PPG_TOLERANCE
            assert abs(found.ppg_m - expected.m) <= PPG_TOLERANCE
            assert abs(found.ppg_p - expected.p) <= PPG_TOLERANCE
            assert abs(found.ppg_n - expected.n) <= NOTCH_TOLERANCE
            assert abs(found.ppg_v - expected.v) <= PPG_TOLERANCE

    @pytest.mark.parametrize("heart_rate_bpm", [60.0, 72.0, 90.0, 105.0, 120.0])
    def test_landmarks_across_heart_rates(self, heart_rate_bpm):
        record, truth = synthesize_record(
            SyntheticConfig(duration_s=20.0, heart_rate_bpm=heart_rate_bpm)
        )
        bundle = filter_record(record)
        r_peaks = detect_r_peaks(bundle.ecg_f, record.sampling_rate_hz)
        result = detect_beat_fiducials(bundle, r_peaks)
        assert len(result) == len(truth.beats)
        for found, expected in zip(result.beats, truth.beats):
            found_marks = (found.r, found.ppg_s, found.ppg_m, found.ppg_p, found.ppg_v)
            true_marks = (expected.r, expected.s, expected.m, expected.p, expected.v)
            assert np.abs(np.subtract(found_marks, true_marks)).max() <= PPG_TOLERANCE
            assert abs(found.ppg_n - expected.n) <= NOTCH_TOLERANCE

    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_retains_beats_under_moderate_noise(self, seed):
        record, truth = synthesize_record(
            SyntheticConfig(duration_s=60.0, noise_std=0.02, seed=seed)
        )
        bundle = filter_record(record)
        r_peaks = detect_r_peaks(bundle.ecg_f, record.sampling_rate_hz)
        result = detect_beat_fiducials(bundle, r_peaks)
        assert len(result) / len(truth.beats) >= 0.95

    def test_beats_are_ordered_and_in_bounds(self, detection):
        bundle, _, result, _ = detection
        assert all(beat.is_ordered(bundle.n_samples) for beat in result.beats)

    def test_consecutive_beats_share_valleys(self, detection):
        _, _, result, _ = detection
        for current, following in zip(result.beats, result.beats[1:]):
            assert current.ppg_v == following.ppg_s

    def test_every_interval_is_accounted_for(self, detection):
        _, r_peaks, result, _ = detection
        assert len(result) + result.dropped + result.discarded == len(r_peaks) - 1

    def test_needs_two_peaks(self, detection):
        bundle, r_peaks, _, _ = detection
        with pytest.raises(DetectionError, match="at least 2 R peaks"):
            detect_beat_fiducials(bundle, r_peaks[:1])


class TestBeatFiducials:
    def test_ordered_beat(self):
        assert _beat().is_ordered()
        assert _beat().is_ordered(n_samples=801)

    def test_out_of_bounds(self):
        assert not _beat().is_ordered(n_samples=800)

    @pytest.mark.parametrize(
        "overrides",
        [{"ppg_s": 0}, {"ppg_n": 199}, {"ppg_v": 400}, {"appg_p": 190}],
    )
    def test_order_violations(self, overrides):
        assert not _beat(**overrides).is_ordered()

    def test_shifted(self):
        shifted = _beat().shifted(10)
        assert shifted.r == 10
        assert shifted.appg_v == 190
