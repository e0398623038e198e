import importlib.util
from types import SimpleNamespace

import pytest

from cuffless.estimation import BasalBP, BPReading, EndpointConfig
from cuffless.evaluation import (
    BaselineEstimator,
    EndpointEstimator,
    OracleEstimator,
    ZeroEstimator,
    make_estimator,
)
from cuffless.exceptions import EvaluationError

needs_tenacity = pytest.mark.skipif(
    importlib.util.find_spec("tenacity") is None, reason="tenacity is not installed"
)


def reply_client(text):
    def create(**kwargs):
        message = SimpleNamespace(content=text)
        return SimpleNamespace(choices=[SimpleNamespace(message=message)])

    completions = SimpleNamespace(create=create)
    return SimpleNamespace(chat=SimpleNamespace(completions=completions))


@pytest.fixture
def endpoint_config():
    return EndpointConfig(
        base_url="http://localhost:8000/v1", model_name="bp-llm", backoff_base_s=0.0
    )


@pytest.fixture
def basal():
    return {"S001": BasalBP(120.0, 80.0)}


class TestMakeEstimator:
    @pytest.mark.parametrize(
        "name,cls",
        [
            ("zero", ZeroEstimator),
            ("oracle", OracleEstimator),
            ("dtr", BaselineEstimator),
            ("adaboost", BaselineEstimator),
        ],
    )
    def test_names(self, name, cls):
        estimator = make_estimator(name)
        assert isinstance(estimator, cls)
        assert estimator.name == name

    def test_unknown(self):
        with pytest.raises(EvaluationError, match="Unknown estimator 'svr'"):
            make_estimator("svr")

    def test_endpoint_needs_a_config(self):
        with pytest.raises(EvaluationError, match="--endpoint-url"):
            make_estimator("endpoint")

    def test_zero_is_not_a_baseline_estimator(self):
        with pytest.raises(EvaluationError):
            BaselineEstimator("zero")


class TestSimpleEstimators:
    def test_zero_returns_basal(self, make_vector, basal):
        fv = make_vector(visit_day="D7")
        (estimate,) = ZeroEstimator().estimate([], [fv], basal, 0)
        assert estimate.reading == BPReading(120.0, 80.0)
        assert estimate.label == "S001/D7"

    def test_oracle_returns_reference(self, make_vector, basal):
        fv = make_vector(visit_day="D14", sbp=131.0, dbp=84.0)
        (estimate,) = OracleEstimator().estimate([], [fv], basal, 0)
        assert estimate.reading == BPReading(131.0, 84.0)


@needs_tenacity
class TestEndpointEstimator:
    def test_map_pp_become_a_reading(self, endpoint_config, make_vector, profile, basal):
        client = reply_client("Predicted_MAP: 86.0 mmHg, Predicted_PP: 36.0 mmHg.")
        estimator = EndpointEstimator(endpoint_config, client=client)
        (estimate,) = estimator.estimate([], [make_vector(user=profile)], basal, 0)
        assert estimate.reading.sbp_mmhg == pytest.approx(110.0)
        assert estimate.reading.dbp_mmhg == pytest.approx(74.0)

    def test_missing_profile_is_a_fault(self, endpoint_config, make_vector, basal):
        client = reply_client("Predicted_MAP: 86.0 mmHg, Predicted_PP: 36.0 mmHg.")
        estimator = EndpointEstimator(endpoint_config, "knowledge-user", client=client)
        (estimate,) = estimator.estimate([], [make_vector()], basal, 0)
        assert estimate.reading is None
        assert "no user profile" in estimate.error

    def test_impossible_reply_is_a_fault(self, endpoint_config, make_vector, basal):
        client = reply_client("Predicted_MAP: 10 mmHg, Predicted_PP: 60 mmHg.")
        estimator = EndpointEstimator(endpoint_config, "basic", client=client)
        (estimate,) = estimator.estimate([], [make_vector()], basal, 0)
        assert estimate.reading is None
        assert "non-positive DBP" in estimate.error

    def test_unparseable_reply_is_a_fault(self, endpoint_config, make_vector, basal):
        estimator = EndpointEstimator(
            endpoint_config, "basic", client=reply_client("It depends.")
        )
        vectors = [make_vector("S001", "D7"), make_vector("S001", "D14")]
        estimates = estimator.estimate([], vectors, basal, 0)
        assert [e.label for e in estimates] == ["S001/D7", "S001/D14"]
        assert all(e.reading is None for e in estimates)
