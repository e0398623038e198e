from .records import SignalRecord, UserProfile, VisitDay
from .ingest import load_profiles, load_records, synthesize_cohort, synthesize_record
from .features import extract_features, extract_record_features, group_features
from .prompting import build_prompt, build_tuning_records, parse_response
from .estimation import (
    BPReading,
    calibrate,
    compute_basal,
    predict_baseline,
    train_baseline,
)
from .evaluation import compute_metrics, make_folds, run_experiment, sweep_alpha
from .config import RunConfig, resolve_run_config

__version__ = "0.1.0"

__all__ = [
    "SignalRecord",
    "UserProfile",
    "VisitDay",
    "BPReading",
    "RunConfig",
    "load_records",
    "load_profiles",
    "synthesize_record",
    "synthesize_cohort",
    "extract_record_features",
    "extract_features",
    "group_features",
    "build_prompt",
    "build_tuning_records",
    "parse_response",
    "compute_basal",
    "calibrate",
    "train_baseline",
    "predict_baseline",
    "compute_metrics",
    "make_folds",
    "run_experiment",
    "sweep_alpha",
    "resolve_run_config",
]
