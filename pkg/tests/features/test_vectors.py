import math

import numpy as np
import pytest

from cuffless.exceptions import BeatFeatureError, FeatureError
from cuffless.features import (
    FEATURE_NAMES,
    N_FEATURES,
    BeatFeatureVector,
    RecordMeta,
    aggregate_features,
    feature_number,
)
from cuffless.records import VisitDay


class TestCatalogue:
    def test_thirty_one_unique_names(self):
        assert N_FEATURES == 31
        assert len(set(FEATURE_NAMES)) == 31

    @pytest.mark.parametrize(
        "name,number",
        [
            ("ptt_rv", 1),
            ("ptt_rp", 3),
            ("asc_time_ppg", 4),
            ("asc_slope_appg", 9),
            ("desc_time_ppg", 16),
            ("desc_intensity_diff_appg", 27),
            ("lasi", 28),
            ("pulse_intensity_rate", 31),
        ],
    )
    def test_numbering(self, name, number):
        assert feature_number(name) == number

    def test_unknown_name(self):
        with pytest.raises(FeatureError, match="Unknown feature"):
            feature_number("heart_rate")


class TestFeatureVector:
    def test_lookup_by_number(self, make_vector):
        fv = make_vector()
        assert fv[1] == fv.values[0]
        assert fv[31] == fv.values[30]

    @pytest.mark.parametrize("number", [0, 32])
    def test_lookup_out_of_range(self, make_vector, number):
        with pytest.raises(FeatureError):
            make_vector()[number]

    def test_wrong_length(self, make_vector):
        with pytest.raises(FeatureError, match="Expected 31"):
            make_vector(values=(1.0,) * 30)

    def test_non_finite_names_the_feature(self, make_vector):
        values = [1.0] * 31
        values[27] = math.nan
        with pytest.raises(FeatureError, match="lasi"):
            make_vector(values=tuple(values))

    def test_identity(self, make_vector):
        fv = make_vector("S010", "d21")
        assert fv.visit_day is VisitDay.D21
        assert fv.label == "S010/D21"
        assert fv.key == ("S010", 3)

    def test_beat_vector_validation(self):
        with pytest.raises(BeatFeatureError):
            BeatFeatureVector(values=(1.0,) * 3)
        beat = BeatFeatureVector(values=tuple(float(i) for i in range(1, 32)))
        assert beat[5] == 5.0
        assert beat.as_dict()["pulse_intensity_rate"] == 31.0


class TestAggregateFeatures:
    @pytest.fixture
    def meta(self, profile):
        return RecordMeta("S001", VisitDay.D7, 118.0, 76.0, profile)

    def test_element_wise_mean(self, meta):
        beats = [
            BeatFeatureVector(values=(1.0,) * 31),
            BeatFeatureVector(values=(2.0,) * 31),
            BeatFeatureVector(values=(6.0,) * 31),
        ]
        fv = aggregate_features(beats, meta)
        assert fv.values == (3.0,) * 31
        assert fv.beat_count == 3
        assert fv.label == "S001/D7"
        assert fv.ref_sbp_mmhg == 118.0
        assert fv.user == meta.user

    def test_independent_of_beat_order(self, meta):
        rng = np.random.default_rng(0)
        beats = [
            BeatFeatureVector(values=tuple(rng.uniform(1e-3, 1e6, 31).tolist()))
            for _ in range(25)
        ]
        forward = aggregate_features(beats, meta)
        backward = aggregate_features(list(reversed(beats)), meta)
        assert forward.values == backward.values

    def test_no_beats(self, meta):
        with pytest.raises(FeatureError, match="zero beats"):
            aggregate_features([], meta)
