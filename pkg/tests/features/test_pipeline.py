import logging

import numpy as np
import pytest

from cuffless.exceptions import RecordRejectedError
from cuffless.features import (
    ExtractionSettings,
    extract_features,
    extract_record_features,
    feature_number,
)
from cuffless.ingest import QualityReason, QualityThresholds
from cuffless.ingest.synthetic import SyntheticConfig, synthesize_record
from cuffless.records import SignalRecord


@pytest.fixture(scope="module")
def extracted(synthetic_pair):
    record, truth = synthetic_pair
    return extract_record_features(record), record, truth


def _flat(subject_id="S009"):
    return SignalRecord(subject_id, "D", 250.0, np.zeros(5000), np.zeros(5000), 120.0, 80.0)


class TestExtractRecordFeatures:
    def test_every_complete_beat_is_averaged(self, extracted):
        fv, _, truth = extracted
        assert fv.beat_count == len(truth.beats)

    def test_transit_time_matches_the_generator(self, extracted):
        fv, _, _ = extracted
        # Default synthetic PTT is 200 ms.
        assert fv[feature_number("ptt_rv")] == pytest.approx(0.200, abs=0.01)

    def test_pulse_rate_is_the_beat_period(self, extracted):
        fv, _, _ = extracted
        assert fv[feature_number("pulse_rate")] == pytest.approx(60.0 / 72.0, abs=0.005)

    def test_identity_and_reference_are_carried(self, extracted, profile):
        _, record, _ = extracted
        fv = extract_record_features(record, profile)
        assert fv.label == record.label
        assert fv.ref_sbp_mmhg == record.ref_sbp_mmhg
        assert fv.user == profile

    def test_flat_record_is_rejected_with_a_report(self):
        with pytest.raises(RecordRejectedError) as exc_info:
            extract_record_features(_flat())
        report = exc_info.value.report
        assert report is not None
        assert QualityReason.FLATLINE in report.reasons
        assert "S009/D" in str(exc_info.value)

    def test_short_record_is_rejected(self):
        record, _ = synthesize_record(SyntheticConfig(duration_s=9.5, heart_rate_bpm=100.0))
        settings = ExtractionSettings(thresholds=QualityThresholds(min_beats=5))
        with pytest.raises(RecordRejectedError, match="below the 10 s minimum"):
            extract_record_features(record, settings=settings)

    def test_beat_threshold_is_configurable(self, extracted):
        _, record, truth = extracted
        settings = ExtractionSettings(
            thresholds=QualityThresholds(min_beats=len(truth.beats) + 1)
        )
        with pytest.raises(RecordRejectedError, match="beat-count-too-low"):
            extract_record_features(record, settings=settings)


class TestExtractFeatures:
    def test_failures_become_faults(self, synthetic_pair, profile, caplog):
        record, _ = synthetic_pair
        with caplog.at_level(logging.WARNING, logger="cuffless.features"):
            result = extract_features([record, _flat()], {record.subject_id: profile})
        assert [fv.label for fv in result.vectors] == [record.label]
        assert result.vectors[0].user == profile
        assert [(f.subject_id, f.visit_day) for f in result.faults] == [("S009", "D")]
        assert "S009/D" in caplog.text

    def test_threads_keep_input_order(self):
        records = [
            synthesize_record(
                SyntheticConfig(duration_s=12.0, subject_id=f"S{i}", ptt_ms=150.0 + 10 * i)
            )[0]
            for i in range(4)
        ]
        serial = extract_features(records)
        threaded = extract_features(records, jobs=3)
        assert [fv.values for fv in threaded.vectors] == [fv.values for fv in serial.vectors]
        assert [fv.subject_id for fv in threaded.vectors] == ["S0", "S1", "S2", "S3"]
