"""Metrics, cross-validation, calibration sweeps and report export."""

from .estimators import (
    ESTIMATOR_NAMES,
    BaselineEstimator,
    EndpointEstimator,
    Estimator,
    FreeEstimate,
    OracleEstimator,
    ZeroEstimator,
    make_estimator,
)
from .experiment import (
    DEFAULT_ALPHA_GRID,
    DEFAULT_TRAINING_FRACTIONS,
    EvaluationFault,
    EvaluationReport,
    ExperimentConfig,
    FoldMetrics,
    FreeEstimateSet,
    ScoredRecord,
    basal_by_subject,
    compute_free_estimates,
    run_experiment,
    score,
    sweep_alpha,
    sweep_context,
    sweep_training_size,
)
from .export import (
    report_to_yaml,
    write_plot_data,
    write_report,
    write_sweep_summary,
)
from .folds import FoldPlan, make_folds, make_record_folds
from .metrics import (
    BlandAltman,
    MetricSet,
    average_metrics,
    bland_altman,
    compute_metrics,
    pearson_r,
)

__all__ = [
    "compute_metrics",
    "pearson_r",
    "bland_altman",
    "average_metrics",
    "make_folds",
    "make_record_folds",
    "make_estimator",
    "basal_by_subject",
    "compute_free_estimates",
    "score",
    "run_experiment",
    "sweep_alpha",
    "sweep_training_size",
    "sweep_context",
    "report_to_yaml",
    "write_report",
    "write_plot_data",
    "write_sweep_summary",
    "DEFAULT_ALPHA_GRID",
    "DEFAULT_TRAINING_FRACTIONS",
    "ESTIMATOR_NAMES",
    "BlandAltman",
    "MetricSet",
    "FoldPlan",
    "Estimator",
    "ZeroEstimator",
    "OracleEstimator",
    "BaselineEstimator",
    "EndpointEstimator",
    "FreeEstimate",
    "EvaluationFault",
    "EvaluationReport",
    "ExperimentConfig",
    "FoldMetrics",
    "FreeEstimateSet",
    "ScoredRecord",
]
