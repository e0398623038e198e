"""Blood pressure conversions, calibration, endpoint and baseline estimators."""

from .conversions import BPReading, map_pp_from_reading, reading_from_map_pp
from .calibration import (
    DEFAULT_ALPHA,
    BasalBP,
    calibrate,
    check_alpha,
    compute_basal,
    zero_baseline,
)
from .baselines import (
    BaselineHyperparameters,
    BaselineKind,
    BaselineModel,
    BaselinePrediction,
    clamp_reading,
    predict_baseline,
    predict_many,
    train_baseline,
)
from .endpoint import EndpointClient, EndpointConfig, EndpointOutcome, estimate_via_endpoint
from .trees import AdaBoostR2, RegressionTree

__all__ = [
    "map_pp_from_reading",
    "reading_from_map_pp",
    "compute_basal",
    "calibrate",
    "check_alpha",
    "zero_baseline",
    "train_baseline",
    "predict_baseline",
    "predict_many",
    "clamp_reading",
    "estimate_via_endpoint",
    "DEFAULT_ALPHA",
    "BPReading",
    "BasalBP",
    "BaselineHyperparameters",
    "BaselineKind",
    "BaselineModel",
    "BaselinePrediction",
    "EndpointClient",
    "EndpointConfig",
    "EndpointOutcome",
    "AdaBoostR2",
    "RegressionTree",
]
