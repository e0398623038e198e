import numpy as np
import pytest
import yaml

from cuffless.estimation import predict_many, train_baseline
from cuffless.exceptions import BaselineTrainingError, SchemaMismatchError
from cuffless.serializers import ModelDeserializer, ModelSerializer
from cuffless.serializers.model_serializer import MODEL_FORMAT, MODEL_FORMAT_VERSION


@pytest.fixture(params=["dtr", "adaboost"])
def model(request, cohort_vectors):
    return train_baseline(request.param, cohort_vectors, seed=4)


@pytest.fixture
def payload(model):
    return ModelSerializer().serialize(model)


class TestModelSerializer:
    def test_header(self, model, payload):
        assert payload["format"] == MODEL_FORMAT
        assert payload["format_version"] == MODEL_FORMAT_VERSION
        assert payload["kind"] == model.kind.value
        assert payload["schema_hash"] == model.schema_hash
        assert payload["columns"][-1] == "hypertension_history"
        assert payload["hyperparameters"]["dtr_max_depth"] == 6

    def test_payload_is_plain_yaml(self, payload):
        text = yaml.safe_dump(payload, sort_keys=False)
        assert yaml.safe_load(text) == payload


class TestModelDeserializer:
    def test_restored_model_predicts_the_same(self, cohort_vectors, model, payload):
        restored = ModelDeserializer().deserialize(yaml.safe_load(yaml.safe_dump(payload)))
        assert restored.kind is model.kind
        assert restored.columns == model.columns
        original = predict_many(model, cohort_vectors[:10])
        again = predict_many(restored, cohort_vectors[:10])
        np.testing.assert_array_equal(
            [p.reading.sbp_mmhg for p in again], [p.reading.sbp_mmhg for p in original]
        )

    def test_unknown_format(self, payload):
        with pytest.raises(SchemaMismatchError, match="Not a baseline model file"):
            ModelDeserializer().deserialize(payload | {"format": "other-format"})

    def test_unsupported_version(self, payload):
        with pytest.raises(SchemaMismatchError, match="format version 2"):
            ModelDeserializer().deserialize(payload | {"format_version": 2})

    def test_tampered_columns(self, payload):
        columns = list(payload["columns"])
        columns[0], columns[1] = columns[1], columns[0]
        with pytest.raises(SchemaMismatchError, match="schema hash"):
            ModelDeserializer().deserialize(payload | {"columns": columns})

    def test_malformed_regressor(self, payload):
        with pytest.raises(BaselineTrainingError, match="Malformed"):
            ModelDeserializer().deserialize(payload | {"sbp_model": {"max_depth": 3}})
