"""Native baseline estimators trained on the feature table."""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from ..exceptions import BaselineTrainingError, SchemaMismatchError
from ..features.vectors import FEATURE_NAMES, FeatureVector
from ..ingest.profiles import PROFILE_FIELDS
from .conversions import BPReading
from .trees import AdaBoostR2, FloatArray, RegressionTree

logger = logging.getLogger("cuffless.estimation")

MIN_TRAINING_ROWS = 20
# Half-width of the pulse pressure forced on a prediction with SBP <= DBP.
CLAMP_HALF_PP_MMHG = 5.0


class BaselineKind(str, Enum):
    """Baseline estimator family."""

    ZERO = "zero"
    DTR = "dtr"
    ADABOOST = "adaboost"

    @property
    def trainable(self) -> bool:
        return self is not BaselineKind.ZERO


@dataclass(frozen=True)
class BaselineHyperparameters:
    """Hyperparameters of the trainable baselines.

    Args:
        dtr_max_depth: Depth limit of the decision tree regressor.
        dtr_min_leaf: Minimum rows per leaf of the decision tree regressor.
        adaboost_rounds: Boosting rounds.
        adaboost_max_depth: Depth of each boosted tree.
        adaboost_min_leaf: Minimum rows per leaf of each boosted tree.
    """

    dtr_max_depth: int = 6
    dtr_min_leaf: int = 5
    adaboost_rounds: int = 50
    adaboost_max_depth: int = 3
    adaboost_min_leaf: int = 5

    def __post_init__(self) -> None:
        for name in ("dtr_min_leaf", "adaboost_rounds", "adaboost_min_leaf"):
            if getattr(self, name) < 1:
                raise BaselineTrainingError(f"{name} must be >= 1, got {getattr(self, name)}.")
        for name in ("dtr_max_depth", "adaboost_max_depth"):
            if getattr(self, name) < 0:
                raise BaselineTrainingError(f"{name} must be >= 0, got {getattr(self, name)}.")


def input_columns(with_profile: bool) -> tuple[str, ...]:
    """Regression inputs: the features, then the profile when available."""
    return FEATURE_NAMES + (PROFILE_FIELDS if with_profile else ())


def schema_hash(columns: Sequence[str]) -> str:
    """SHA-256 of the ordered input column names."""
    return hashlib.sha256("\n".join(columns).encode("utf-8")).hexdigest()


def _row(fv: FeatureVector, with_profile: bool) -> list[float]:
    row = list(fv.values)
    if with_profile:
        if fv.user is None:
            raise SchemaMismatchError(
                f"Record '{fv.label}' has no profile but the model expects one.",
                suggestions=["Load subject profiles or retrain on features only"],
            )
        row.extend(fv.user.as_inputs())
    return row


def design_matrix(vectors: Sequence[FeatureVector], with_profile: bool) -> FloatArray:
    return np.array([_row(fv, with_profile) for fv in vectors], dtype=np.float64)


Regressor = RegressionTree | AdaBoostR2


@dataclass(frozen=True)
class BaselineModel:
    """A trained baseline: independent SBP and DBP regressors.

    Args:
        kind: Estimator family.
        columns: Input column names in matrix order.
        schema_hash: Hash of `columns`, checked on prediction and load.
        seed: Seed used for training.
        hyperparameters: Training hyperparameters.
        sbp_model: Systolic regressor.
        dbp_model: Diastolic regressor.
        n_train_rows: Number of training rows.
    """

    kind: BaselineKind
    columns: tuple[str, ...]
    schema_hash: str
    seed: int
    hyperparameters: BaselineHyperparameters
    sbp_model: Regressor
    dbp_model: Regressor
    n_train_rows: int

    def __post_init__(self) -> None:
        if schema_hash(self.columns) != self.schema_hash:
            raise SchemaMismatchError(
                f"{self.kind.value} model schema hash does not match its columns."
            )

    @property
    def with_profile(self) -> bool:
        return len(self.columns) > len(FEATURE_NAMES)


@dataclass(frozen=True)
class BaselinePrediction:
    """A baseline reading; `clamped` is set when SBP <= DBP had to be fixed."""

    reading: BPReading
    clamped: bool = False


def _make_regressor(
    kind: BaselineKind, hyper: BaselineHyperparameters, seed: int
) -> Regressor:
    if kind is BaselineKind.DTR:
        return RegressionTree(max_depth=hyper.dtr_max_depth, min_leaf=hyper.dtr_min_leaf)
    return AdaBoostR2(
        n_rounds=hyper.adaboost_rounds,
        max_depth=hyper.adaboost_max_depth,
        min_leaf=hyper.adaboost_min_leaf,
        seed=seed,
    )


def train_baseline(
    kind: BaselineKind | str,
    rows: Sequence[FeatureVector],
    hyper: BaselineHyperparameters | None = None,
    seed: int = 0,
) -> BaselineModel:
    """Fit SBP and DBP regressors on feature vectors and their references.

    The profile is used as input when every row carries one.

    Raises:
        BaselineTrainingError: For the zero kind, fewer than 20 rows or
            inputs that are constant across all rows.
    """
    kind = BaselineKind(kind)
    if not kind.trainable:
        raise BaselineTrainingError("The zero baseline has no trainable state.")
    hyper = hyper or BaselineHyperparameters()
    if len(rows) < MIN_TRAINING_ROWS:
        raise BaselineTrainingError(
            f"{kind.value} needs at least {MIN_TRAINING_ROWS} training rows, "
            f"got {len(rows)}."
        )

    with_profile = all(fv.user is not None for fv in rows)
    columns = input_columns(with_profile)
    x = design_matrix(rows, with_profile)
    if np.all(np.ptp(x, axis=0) == 0):
        raise BaselineTrainingError(
            f"All {len(columns)} input columns are constant across the training rows."
        )
    y_sbp = np.array([fv.ref_sbp_mmhg for fv in rows])
    y_dbp = np.array([fv.ref_dbp_mmhg for fv in rows])

    sbp_model = _make_regressor(kind, hyper, seed).fit(x, y_sbp)
    dbp_model = _make_regressor(kind, hyper, seed + 1).fit(x, y_dbp)
    logger.debug(f"Trained {kind.value} baseline on {len(rows)} rows (seed {seed})")
    return BaselineModel(
        kind=kind,
        columns=columns,
        schema_hash=schema_hash(columns),
        seed=seed,
        hyperparameters=hyper,
        sbp_model=sbp_model,
        dbp_model=dbp_model,
        n_train_rows=len(rows),
    )


def clamp_reading(sbp: float, dbp: float) -> BaselinePrediction:
    """Reading from raw predictions, forcing a 10 mmHg PP if SBP <= DBP."""
    if sbp > dbp:
        return BaselinePrediction(BPReading(sbp, dbp))
    mean = (sbp + dbp) / 2.0
    return BaselinePrediction(
        BPReading(mean + CLAMP_HALF_PP_MMHG, mean - CLAMP_HALF_PP_MMHG), clamped=True
    )


def _check_schema(model: BaselineModel, fv: FeatureVector) -> None:
    if model.with_profile and fv.user is None:
        raise SchemaMismatchError(
            f"{model.kind.value} model expects profile inputs but '{fv.label}' has none."
        )


def predict_many(
    model: BaselineModel, vectors: Sequence[FeatureVector]
) -> list[BaselinePrediction]:
    """Predict every vector; clamped predictions are logged at WARNING."""
    if not vectors:
        return []
    for fv in vectors:
        _check_schema(model, fv)
    x = design_matrix(vectors, model.with_profile)
    sbp = model.sbp_model.predict(x)
    dbp = model.dbp_model.predict(x)
    predictions = [clamp_reading(float(s), float(d)) for s, d in zip(sbp, dbp)]
    for fv, prediction in zip(vectors, predictions):
        if prediction.clamped:
            logger.warning(f"Clamped {model.kind.value} prediction for '{fv.label}'")
    return predictions


def predict_baseline(model: BaselineModel, fv: FeatureVector) -> BaselinePrediction:
    """Predict SBP and DBP for one feature vector.

    Raises:
        SchemaMismatchError: If the model expects inputs `fv` does not have.
    """
    return predict_many(model, [fv])[0]
