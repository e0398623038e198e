"""Estimators evaluated by the experiment runner.

Each estimator turns the test records of one fold into free (uncalibrated)
readings. Trainable estimators fit on the fold's training records first.
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Mapping, Sequence

from ..estimation.baselines import (
    BaselineHyperparameters,
    BaselineKind,
    predict_many,
    train_baseline,
)
from ..estimation.calibration import BasalBP, zero_baseline
from ..estimation.conversions import BPReading, reading_from_map_pp
from ..estimation.endpoint import EndpointClient, EndpointConfig
from ..exceptions import CufflessError, EvaluationError
from ..features.grouping import TABLE1_GROUPING, GroupingConfig
from ..features.vectors import FeatureVector
from ..prompting.builder import PromptRecord, build_prompt
from ..prompting.templates import ContextLevel

logger = logging.getLogger("cuffless.evaluation")

ESTIMATOR_NAMES = ("zero", "oracle", "dtr", "adaboost", "endpoint")


@dataclass(frozen=True)
class FreeEstimate:
    """Free reading for one test record, or the reason there is none."""

    subject_id: str
    visit_day: str
    reading: BPReading | None = None
    error: str | None = None
    clamped: bool = False

    @property
    def label(self) -> str:
        return f"{self.subject_id}/{self.visit_day}"


def _estimate(fv: FeatureVector, reading: BPReading, clamped: bool = False) -> FreeEstimate:
    return FreeEstimate(fv.subject_id, fv.visit_day.value, reading=reading, clamped=clamped)


def _fault(fv: FeatureVector, error: str) -> FreeEstimate:
    return FreeEstimate(fv.subject_id, fv.visit_day.value, error=error)


class Estimator(ABC):
    """Produces free readings for the test records of a fold."""

    name: str = "estimator"
    trainable: bool = False

    @abstractmethod
    def estimate(
        self,
        train: Sequence[FeatureVector],
        test: Sequence[FeatureVector],
        basal: Mapping[str, BasalBP],
        seed: int,
    ) -> list[FreeEstimate]:
        """One estimate per test record, in `test` order."""
        ...


class ZeroEstimator(Estimator):
    """Assumes no change from the subject's basal BP."""

    name = "zero"

    def estimate(
        self,
        train: Sequence[FeatureVector],
        test: Sequence[FeatureVector],
        basal: Mapping[str, BasalBP],
        seed: int,
    ) -> list[FreeEstimate]:
        return [_estimate(fv, zero_baseline(basal[fv.subject_id])) for fv in test]


class OracleEstimator(Estimator):
    """Returns the reference reading; validates the harness."""

    name = "oracle"

    def estimate(
        self,
        train: Sequence[FeatureVector],
        test: Sequence[FeatureVector],
        basal: Mapping[str, BasalBP],
        seed: int,
    ) -> list[FreeEstimate]:
        return [_estimate(fv, BPReading(fv.ref_sbp_mmhg, fv.ref_dbp_mmhg)) for fv in test]


class BaselineEstimator(Estimator):
    """Decision tree or AdaBoost regressor trained per fold."""

    trainable = True

    def __init__(
        self, kind: BaselineKind | str, hyper: BaselineHyperparameters | None = None
    ) -> None:
        self.kind = BaselineKind(kind)
        if not self.kind.trainable:
            raise EvaluationError("Use ZeroEstimator for the zero baseline.")
        self.hyper = hyper or BaselineHyperparameters()
        self.name = self.kind.value

    def estimate(
        self,
        train: Sequence[FeatureVector],
        test: Sequence[FeatureVector],
        basal: Mapping[str, BasalBP],
        seed: int,
    ) -> list[FreeEstimate]:
        if not test:
            return []
        model = train_baseline(self.kind, train, self.hyper, seed)
        predictions = predict_many(model, test)
        return [_estimate(fv, p.reading, p.clamped) for fv, p in zip(test, predictions)]


class EndpointEstimator(Estimator):
    """Renders prompts and queries a served model for MAP/PP."""

    name = "endpoint"

    def __init__(
        self,
        config: EndpointConfig,
        level: ContextLevel | str = ContextLevel.BP_KNOWLEDGE_USER,
        grouping: GroupingConfig = TABLE1_GROUPING,
        *,
        client: Any | None = None,
    ) -> None:
        self.level = ContextLevel.parse(level)
        self.grouping = grouping
        self._client = EndpointClient(config, client=client)

    def estimate(
        self,
        train: Sequence[FeatureVector],
        test: Sequence[FeatureVector],
        basal: Mapping[str, BasalBP],
        seed: int,
    ) -> list[FreeEstimate]:
        results: list[FreeEstimate | None] = [None] * len(test)
        prompts: list[PromptRecord] = []
        positions: list[int] = []
        for i, fv in enumerate(test):
            try:
                prompts.append(build_prompt(fv, self.level, self.grouping))
                positions.append(i)
            except CufflessError as e:
                results[i] = _fault(fv, str(e))

        for i, outcome in zip(positions, self._client.estimate_many(prompts)):
            fv = test[i]
            if outcome.estimate is None:
                results[i] = _fault(fv, outcome.error or "no estimate")
                continue
            try:
                estimate = outcome.estimate
                reading = reading_from_map_pp(estimate.map_mmhg, estimate.pp_mmhg)
            except CufflessError as e:
                results[i] = _fault(fv, str(e))
                continue
            results[i] = _estimate(fv, reading)
        return [r for r in results if r is not None]


def make_estimator(
    name: str,
    *,
    hyper: BaselineHyperparameters | None = None,
    endpoint: EndpointConfig | None = None,
    level: ContextLevel | str = ContextLevel.BP_KNOWLEDGE_USER,
    grouping: GroupingConfig = TABLE1_GROUPING,
    client: Any | None = None,
) -> Estimator:
    """Build an estimator from its command-line name.

    Raises:
        EvaluationError: For an unknown name or an endpoint without config.
    """
    if name == "zero":
        return ZeroEstimator()
    if name == "oracle":
        return OracleEstimator()
    if name in ("dtr", "adaboost"):
        return BaselineEstimator(name, hyper)
    if name == "endpoint":
        if endpoint is None:
            raise EvaluationError(
                "The endpoint estimator needs an endpoint URL and model name.",
                suggestions=["Pass --endpoint-url and --model"],
            )
        return EndpointEstimator(endpoint, level, grouping, client=client)
    raise EvaluationError(
        f"Unknown estimator '{name}'. Expected one of: {', '.join(ESTIMATOR_NAMES)}."
    )
