"""Cross-validated evaluation with basal-BP calibration, plus sweeps.

Free estimates are computed once per fold plan and then calibrated for any
number of alpha values, since calibration acts only on estimator outputs.
"""

from __future__ import annotations

import logging
import math
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from ..estimation.baselines import MIN_TRAINING_ROWS, BaselineHyperparameters, BaselineKind
from ..estimation.calibration import (
    DEFAULT_ALPHA,
    BasalBP,
    calibrate,
    check_alpha,
    compute_basal,
)
from ..estimation.conversions import BPReading
from ..estimation.endpoint import EndpointConfig
from ..exceptions import (
    CufflessError,
    EvaluationError,
    FoldPlanError,
    TrainingSizeError,
)
from ..features.grouping import TABLE1_GROUPING, GroupingConfig
from ..features.vectors import FeatureVector
from ..prompting.templates import ContextLevel
from ..records import VisitDay
from .estimators import BaselineEstimator, EndpointEstimator, Estimator, FreeEstimate
from .folds import FoldPlan, SplitUnit, make_folds, make_record_folds
from .metrics import BlandAltman, MetricSet, average_metrics, bland_altman, compute_metrics
from .metrics import pearson_r

logger = logging.getLogger("cuffless.evaluation")

DEFAULT_ALPHA_GRID: tuple[float, ...] = tuple(round(i / 10, 1) for i in range(11))
DEFAULT_TRAINING_FRACTIONS: tuple[float, ...] = tuple(round(i / 10, 1) for i in range(1, 9))

TrainSelector = Callable[[int, list[FeatureVector]], list[FeatureVector]]


@dataclass(frozen=True)
class ExperimentConfig:
    """Settings of a cross-validated experiment.

    Args:
        alpha: Calibration weight of the free estimate.
        k: Number of folds.
        seed: Fold shuffle and training seed.
        split_unit: "subject" (default) or "record".
        include_calibration_visits: Score day-D visits as well.
        jobs: Folds evaluated in parallel.
    """

    alpha: float = DEFAULT_ALPHA
    k: int = 5
    seed: int = 0
    split_unit: SplitUnit = "subject"
    include_calibration_visits: bool = False
    jobs: int = 1

    def __post_init__(self) -> None:
        check_alpha(self.alpha)
        if self.k < 1:
            raise FoldPlanError(f"k must be >= 1, got {self.k}.")
        if self.split_unit not in ("subject", "record"):
            raise FoldPlanError(f"Unknown split unit '{self.split_unit}'.")
        if self.jobs < 1:
            raise EvaluationError(f"jobs must be >= 1, got {self.jobs}.")


@dataclass(frozen=True)
class EvaluationFault:
    """A record that could not be scored."""

    label: str
    message: str


@dataclass(frozen=True)
class ScoredRecord:
    """Reference and calibrated estimate of one test record."""

    subject_id: str
    visit_day: str
    fold: int
    ref_sbp_mmhg: float
    ref_dbp_mmhg: float
    est_sbp_mmhg: float
    est_dbp_mmhg: float
    clamped: bool = False

    @property
    def key(self) -> tuple[str, int]:
        return (self.subject_id, VisitDay.parse(self.visit_day).ordinal)


@dataclass(frozen=True)
class FoldMetrics:
    """Metrics of one test fold; None when the fold scored fewer than 2 records."""

    fold: int
    n_train: int
    n_test: int
    sbp: MetricSet | None
    dbp: MetricSet | None


@dataclass(frozen=True)
class EvaluationReport:
    """Outcome of one experiment at one alpha."""

    estimator: str
    alpha: float
    plan: FoldPlan
    per_fold: tuple[FoldMetrics, ...]
    pooled_sbp: MetricSet
    pooled_dbp: MetricSet
    averaged_sbp: MetricSet | None
    averaged_dbp: MetricSet | None
    bland_altman_sbp: BlandAltman
    bland_altman_dbp: BlandAltman
    pearson_sbp: float | None
    pearson_dbp: float | None
    records: tuple[ScoredRecord, ...]
    faults: tuple[EvaluationFault, ...] = ()
    excluded_subjects: tuple[str, ...] = ()
    excluded_records: int = 0
    fingerprint: str | None = None

    @property
    def n_clamped(self) -> int:
        return sum(1 for r in self.records if r.clamped)


@dataclass(frozen=True)
class FoldEstimates:
    fold: int
    n_train: int
    estimates: tuple[FreeEstimate, ...]


@dataclass(frozen=True)
class FreeEstimateSet:
    """Free estimates of every fold, ready to be calibrated at any alpha."""

    estimator: str
    plan: FoldPlan
    basal: dict[str, BasalBP]
    references: dict[str, BPReading]
    folds: tuple[FoldEstimates, ...]
    excluded_subjects: tuple[str, ...] = ()
    excluded_records: int = 0
    faults: tuple[EvaluationFault, ...] = field(default=())


def basal_by_subject(
    vectors: Iterable[FeatureVector],
) -> tuple[dict[str, BasalBP], tuple[str, ...]]:
    """Basal BP of every subject with a day-D visit, and the subjects without."""
    day_d: dict[str, list[BPReading]] = defaultdict(list)
    subjects: set[str] = set()
    for fv in vectors:
        subjects.add(fv.subject_id)
        if fv.visit_day is VisitDay.D:
            day_d[fv.subject_id].append(BPReading(fv.ref_sbp_mmhg, fv.ref_dbp_mmhg))
    basal = {s: compute_basal(readings) for s, readings in sorted(day_d.items())}
    return basal, tuple(sorted(subjects - basal.keys()))


def _plan_for(vectors: Sequence[FeatureVector], config: ExperimentConfig) -> FoldPlan:
    if config.split_unit == "record":
        return make_record_folds(
            ((fv.subject_id, fv.visit_day) for fv in vectors), config.k, config.seed
        )
    return make_folds((fv.subject_id for fv in vectors), config.k, config.seed)


def compute_free_estimates(
    vectors: Sequence[FeatureVector],
    estimator: Estimator,
    config: ExperimentConfig | None = None,
    plan: FoldPlan | None = None,
    *,
    train_selector: TrainSelector | None = None,
) -> FreeEstimateSet:
    """Run `estimator` on every fold.

    Subjects without a day-D visit have no basal BP; their records are
    excluded and counted.

    Args:
        vectors: Feature vectors of the cohort.
        estimator: Estimator to evaluate.
        config: Experiment settings.
        plan: Fold plan; built from `config` when None.
        train_selector: Optional hook that narrows each fold's training rows.

    Raises:
        EvaluationError: If no subject has day-D data.
        FoldPlanError: If the plan cannot be built.
    """
    config = config or ExperimentConfig()
    vectors = sorted(vectors, key=lambda v: v.key)
    basal, excluded_subjects = basal_by_subject(vectors)
    if not basal:
        raise EvaluationError(
            "No subject has a day-D visit to compute basal BP from.",
            suggestions=["Include the calibration-day recordings in the input"],
        )
    eligible = [fv for fv in vectors if fv.subject_id in basal]
    excluded_records = len(vectors) - len(eligible)
    if excluded_records:
        logger.warning(
            f"Excluded {excluded_records} records of {len(excluded_subjects)} "
            "subjects without day-D data"
        )
    plan = plan or _plan_for(eligible, config)
    references = {fv.label: BPReading(fv.ref_sbp_mmhg, fv.ref_dbp_mmhg) for fv in eligible}

    folds_of: dict[int, list[FeatureVector]] = defaultdict(list)
    unplanned = 0
    for fv in eligible:
        fold = plan.fold_of(fv.subject_id, fv.visit_day)
        if fold is None:
            unplanned += 1
            continue
        folds_of[fold].append(fv)
    if unplanned:
        logger.warning(f"{unplanned} records are not covered by the fold plan")

    def run_fold(fold: int) -> FoldEstimates:
        train = [fv for f, members in folds_of.items() if f != fold for fv in members]
        train.sort(key=lambda v: v.key)
        if train_selector is not None:
            train = train_selector(fold, train)
        test = [
            fv
            for fv in folds_of.get(fold, [])
            if config.include_calibration_visits or fv.visit_day is not VisitDay.D
        ]
        try:
            estimates = estimator.estimate(train, test, basal, config.seed + fold)
        except CufflessError as e:
            logger.error(f"Fold {fold} failed: {e}")
            estimates = [
                FreeEstimate(fv.subject_id, fv.visit_day.value, error=str(e)) for fv in test
            ]
        logger.debug(f"Fold {fold}: {len(train)} training and {len(test)} test records")
        return FoldEstimates(fold=fold, n_train=len(train), estimates=tuple(estimates))

    fold_ids = list(range(plan.k))
    if config.jobs > 1:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            folds = list(pool.map(run_fold, fold_ids))
    else:
        folds = [run_fold(fold) for fold in fold_ids]

    faults = tuple(
        EvaluationFault(e.label, e.error or "no estimate")
        for fold in folds
        for e in fold.estimates
        if e.reading is None
    )
    logger.info(
        f"Ran {estimator.name} over {plan.k} folds "
        f"({sum(len(f.estimates) for f in folds)} test records, {len(faults)} faults)"
    )
    return FreeEstimateSet(
        estimator=estimator.name,
        plan=plan,
        basal=basal,
        references=references,
        folds=tuple(folds),
        excluded_subjects=excluded_subjects,
        excluded_records=excluded_records,
        faults=faults,
    )


def _metrics_or_none(refs: list[float], ests: list[float]) -> MetricSet | None:
    return compute_metrics(refs, ests) if len(refs) >= 2 else None


def score(
    free: FreeEstimateSet, alpha: float = DEFAULT_ALPHA, fingerprint: str | None = None
) -> EvaluationReport:
    """Calibrate cached free estimates at `alpha` and compute the report.

    Pooled metrics are computed over all scored records in subject/visit
    order, so they do not depend on fold order.

    Raises:
        CalibrationError: If alpha is outside [0, 1].
        EvaluationError: If fewer than 2 records could be scored.
    """
    alpha = check_alpha(alpha)
    scored: list[ScoredRecord] = []
    per_fold: list[FoldMetrics] = []
    for fold in free.folds:
        fold_records: list[ScoredRecord] = []
        for estimate in fold.estimates:
            if estimate.reading is None:
                continue
            ref = free.references[estimate.label]
            cal = calibrate(estimate.reading, free.basal[estimate.subject_id], alpha)
            fold_records.append(
                ScoredRecord(
                    subject_id=estimate.subject_id,
                    visit_day=estimate.visit_day,
                    fold=fold.fold,
                    ref_sbp_mmhg=ref.sbp_mmhg,
                    ref_dbp_mmhg=ref.dbp_mmhg,
                    est_sbp_mmhg=cal.sbp_mmhg,
                    est_dbp_mmhg=cal.dbp_mmhg,
                    clamped=estimate.clamped,
                )
            )
        per_fold.append(
            FoldMetrics(
                fold=fold.fold,
                n_train=fold.n_train,
                n_test=len(fold_records),
                sbp=_metrics_or_none(
                    [r.ref_sbp_mmhg for r in fold_records],
                    [r.est_sbp_mmhg for r in fold_records],
                ),
                dbp=_metrics_or_none(
                    [r.ref_dbp_mmhg for r in fold_records],
                    [r.est_dbp_mmhg for r in fold_records],
                ),
            )
        )
        scored.extend(fold_records)

    if len(scored) < 2:
        raise EvaluationError(
            f"Only {len(scored)} records could be scored; metrics need at least 2."
        )
    scored.sort(key=lambda r: r.key)
    ref_sbp = [r.ref_sbp_mmhg for r in scored]
    ref_dbp = [r.ref_dbp_mmhg for r in scored]
    est_sbp = [r.est_sbp_mmhg for r in scored]
    est_dbp = [r.est_dbp_mmhg for r in scored]

    fold_sbp = [m.sbp for m in per_fold if m.sbp is not None]
    fold_dbp = [m.dbp for m in per_fold if m.dbp is not None]
    return EvaluationReport(
        estimator=free.estimator,
        alpha=alpha,
        plan=free.plan,
        per_fold=tuple(per_fold),
        pooled_sbp=compute_metrics(ref_sbp, est_sbp),
        pooled_dbp=compute_metrics(ref_dbp, est_dbp),
        averaged_sbp=average_metrics(fold_sbp) if fold_sbp else None,
        averaged_dbp=average_metrics(fold_dbp) if fold_dbp else None,
        bland_altman_sbp=bland_altman(ref_sbp, est_sbp),
        bland_altman_dbp=bland_altman(ref_dbp, est_dbp),
        pearson_sbp=pearson_r(ref_sbp, est_sbp),
        pearson_dbp=pearson_r(ref_dbp, est_dbp),
        records=tuple(scored),
        faults=free.faults,
        excluded_subjects=free.excluded_subjects,
        excluded_records=free.excluded_records,
        fingerprint=fingerprint,
    )


def run_experiment(
    vectors: Sequence[FeatureVector],
    estimator: Estimator,
    config: ExperimentConfig | None = None,
    plan: FoldPlan | None = None,
    *,
    fingerprint: str | None = None,
) -> EvaluationReport:
    """Cross-validate `estimator` with calibration at `config.alpha`."""
    config = config or ExperimentConfig()
    free = compute_free_estimates(vectors, estimator, config, plan)
    return score(free, config.alpha, fingerprint)


def sweep_alpha(
    vectors: Sequence[FeatureVector],
    estimator: Estimator,
    grid: Sequence[float] = DEFAULT_ALPHA_GRID,
    config: ExperimentConfig | None = None,
    plan: FoldPlan | None = None,
    *,
    fingerprint: str | None = None,
) -> list[tuple[float, EvaluationReport]]:
    """One report per alpha, all from the same free estimates."""
    grid = [check_alpha(a) for a in grid]
    free = compute_free_estimates(vectors, estimator, config, plan)
    return [(alpha, score(free, alpha, fingerprint)) for alpha in grid]


def _subject_sampler(fraction: float, seed: int) -> TrainSelector:
    def select(fold: int, train: list[FeatureVector]) -> list[FeatureVector]:
        subjects = sorted({fv.subject_id for fv in train})
        n_keep = math.ceil(fraction * len(subjects))
        if n_keep < len(subjects):
            rng = np.random.default_rng([seed, fold])
            kept = set(rng.choice(subjects, size=n_keep, replace=False).tolist())
            train = [fv for fv in train if fv.subject_id in kept]
        if len(train) < MIN_TRAINING_ROWS:
            raise TrainingSizeError(
                f"Training fraction {fraction} leaves {len(train)} rows in fold {fold}; "
                f"at least {MIN_TRAINING_ROWS} are required."
            )
        return train

    return select


def sweep_training_size(
    vectors: Sequence[FeatureVector],
    kind: BaselineKind | str,
    fractions: Sequence[float] = DEFAULT_TRAINING_FRACTIONS,
    config: ExperimentConfig | None = None,
    hyper: BaselineHyperparameters | None = None,
    *,
    fingerprint: str | None = None,
) -> list[tuple[float, EvaluationReport]]:
    """Down-sample training subjects of every fold; test folds are untouched.

    Raises:
        TrainingSizeError: If a fraction is outside (0, 1] or leaves fewer
            than 20 training rows in a fold.
    """
    config = config or ExperimentConfig()
    for fraction in fractions:
        if not 0.0 < fraction <= 1.0:
            raise TrainingSizeError(f"Training fraction must be in (0, 1], got {fraction}.")
    estimator = BaselineEstimator(kind, hyper)
    sorted_vectors = sorted(vectors, key=lambda v: v.key)
    basal, _ = basal_by_subject(sorted_vectors)
    plan = _plan_for([fv for fv in sorted_vectors if fv.subject_id in basal], config)

    results: list[tuple[float, EvaluationReport]] = []
    for fraction in fractions:
        free = compute_free_estimates(
            sorted_vectors,
            estimator,
            config,
            plan,
            train_selector=_subject_sampler(fraction, config.seed),
        )
        results.append((fraction, score(free, config.alpha, fingerprint)))
    return results


def sweep_context(
    vectors: Sequence[FeatureVector],
    endpoint: EndpointConfig,
    levels: Sequence[ContextLevel | str] = tuple(ContextLevel),
    config: ExperimentConfig | None = None,
    grouping: GroupingConfig = TABLE1_GROUPING,
    *,
    client: object | None = None,
    fingerprint: str | None = None,
) -> list[tuple[ContextLevel, EvaluationReport]]:
    """Evaluate the endpoint estimator at each context level on one fold plan."""
    config = config or ExperimentConfig()
    sorted_vectors = sorted(vectors, key=lambda v: v.key)
    basal, _ = basal_by_subject(sorted_vectors)
    plan = _plan_for([fv for fv in sorted_vectors if fv.subject_id in basal], config)
    results: list[tuple[ContextLevel, EvaluationReport]] = []
    for level in (ContextLevel.parse(lv) for lv in levels):
        estimator = EndpointEstimator(endpoint, level, grouping, client=client)
        report = run_experiment(sorted_vectors, estimator, config, plan, fingerprint=fingerprint)
        results.append((level, report))
    return results
