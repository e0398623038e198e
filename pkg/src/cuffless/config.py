"""Run configuration resolved from flags, a YAML file, the environment and defaults.

Precedence: command-line flags > YAML config file > `CUFFLESS_*` environment
variables > defaults.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Literal, Mapping, cast

import yaml

from .estimation.baselines import BaselineHyperparameters
from .estimation.calibration import DEFAULT_ALPHA
from .estimation.endpoint import DEFAULT_API_KEY_ENV, EndpointConfig
from .evaluation.estimators import ESTIMATOR_NAMES
from .evaluation.experiment import ExperimentConfig
from .exceptions import CufflessError, RunConfigError
from .features.grouping import GroupingConfig, get_grouping
from .ingest.quality import QualityThresholds
from .prompting.templates import ContextLevel

ENV_PREFIX = "CUFFLESS_"
SWEEPS = ("alpha", "train-size", "context")

# Environment variable (without prefix) -> RunConfig field.
ENV_FIELDS = {
    "ENDPOINT_URL": "endpoint_url",
    "MODEL": "model",
    "ALPHA": "alpha",
    "SEED": "seed",
    "FOLDS": "folds",
    "JOBS": "jobs",
    "MIN_BEATS": "min_beats",
    "MAX_FLATLINE_S": "max_flatline_s",
    "MAX_CLIPPED_FRACTION": "max_clipped_fraction",
    "FLATLINE_TOLERANCE": "flatline_tolerance",
}

# Fields that never change the content of an output artifact.
_NON_FINGERPRINT_FIELDS = frozenset({"out", "jobs", "config_file", "verbose"})

Sweep = Literal["alpha", "train-size", "context"]


@dataclass(frozen=True)
class RunConfig:
    """Resolved configuration of one command-line run.

    Args:
        input: Records, feature table or dataset path, depending on the command.
        out: Output directory.
        format: Record format ("ndjson" or "csv-dir"); inferred when None.
        profiles: Subject profile manifest (YAML).
        context: Prompt context level.
        grouping: Feature grouping preset.
        alpha: Calibration weight.
        estimator: Estimator name.
        endpoint_url: Chat-completions API root.
        model: Served model name.
        folds: Number of cross-validation folds.
        seed: Seed for folds, sampling and training.
        jobs: Worker threads.
        sweep: Optional sweep mode.
        split_unit: "subject" or "record".
        include_calibration_visits: Score day-D visits too.
        loader_mode: "raise" or "skip" malformed records.
        min_beats: Minimum usable beats per record.
        max_flatline_s: Longest constant run allowed in either channel.
        max_clipped_fraction: Largest share of samples allowed at the rails.
        flatline_tolerance: Sample-to-sample change counted as constant.
        hyperparameters: Baseline hyperparameters.
        timeout_s: Endpoint request timeout.
        max_retries: Endpoint retries.
        max_concurrency: Endpoint requests in flight.
        api_key_env: Variable holding the endpoint token.
        config_file: YAML file the values came from, if any.
        verbose: Debug logging.
    """

    input: Path | None = None
    out: Path | None = None
    format: str | None = None
    profiles: Path | None = None
    context: ContextLevel = ContextLevel.BP_KNOWLEDGE_USER
    grouping: str = "table1"
    alpha: float = DEFAULT_ALPHA
    estimator: str = "zero"
    endpoint_url: str | None = None
    model: str | None = None
    folds: int = 5
    seed: int = 0
    jobs: int = 1
    sweep: Sweep | None = None
    split_unit: str = "subject"
    include_calibration_visits: bool = False
    loader_mode: str = "raise"
    min_beats: int = 10
    max_flatline_s: float = 2.0
    max_clipped_fraction: float = 0.01
    flatline_tolerance: float = 1e-9
    hyperparameters: BaselineHyperparameters = field(
        default_factory=BaselineHyperparameters
    )
    timeout_s: float = 30.0
    max_retries: int = 3
    max_concurrency: int = 4
    api_key_env: str = DEFAULT_API_KEY_ENV
    config_file: Path | None = None
    verbose: bool = False

    def __post_init__(self) -> None:
        for name in ("input", "out", "profiles", "config_file"):
            value = getattr(self, name)
            if value is not None and not isinstance(value, Path):
                object.__setattr__(self, name, Path(value))
        try:
            object.__setattr__(self, "context", ContextLevel.parse(self.context))
            get_grouping(self.grouping)
        except CufflessError as e:
            raise RunConfigError(str(e)) from e
        if isinstance(self.hyperparameters, Mapping):
            object.__setattr__(
                self, "hyperparameters", BaselineHyperparameters(**self.hyperparameters)
            )

        if not (math.isfinite(self.alpha) and 0.0 <= self.alpha <= 1.0):
            raise RunConfigError(f"alpha must be in [0, 1], got {self.alpha}.")
        if self.estimator not in ESTIMATOR_NAMES:
            raise RunConfigError(
                f"Unknown estimator '{self.estimator}'.",
                suggestions=[f"Choose one of: {', '.join(ESTIMATOR_NAMES)}"],
            )
        if self.format not in (None, "ndjson", "csv-dir"):
            raise RunConfigError(f"Unknown record format '{self.format}'.")
        if self.sweep not in (None, *SWEEPS):
            raise RunConfigError(f"Unknown sweep '{self.sweep}'.")
        if self.split_unit not in ("subject", "record"):
            raise RunConfigError(f"Unknown split unit '{self.split_unit}'.")
        if self.loader_mode not in ("raise", "skip"):
            raise RunConfigError("loader_mode must be 'raise' or 'skip'.")
        for name in ("folds", "jobs", "min_beats", "max_concurrency"):
            if getattr(self, name) < 1:
                raise RunConfigError(f"{name} must be >= 1, got {getattr(self, name)}.")
        if self.max_retries < 0:
            raise RunConfigError(f"max_retries must be >= 0, got {self.max_retries}.")
        try:
            _ = self.thresholds
        except CufflessError as e:
            raise RunConfigError(str(e)) from e

    @property
    def grouping_config(self) -> GroupingConfig:
        return get_grouping(self.grouping)

    @property
    def thresholds(self) -> QualityThresholds:
        return QualityThresholds(
            min_beats=self.min_beats,
            max_flatline_s=self.max_flatline_s,
            max_clipped_fraction=self.max_clipped_fraction,
            flatline_tolerance=self.flatline_tolerance,
        )

    def experiment_config(self) -> ExperimentConfig:
        return ExperimentConfig(
            alpha=self.alpha,
            k=self.folds,
            seed=self.seed,
            split_unit=cast(Literal["subject", "record"], self.split_unit),
            include_calibration_visits=self.include_calibration_visits,
            jobs=self.jobs,
        )

    def endpoint_config(self) -> EndpointConfig | None:
        """Endpoint settings, or None when URL or model is not configured."""
        if not (self.endpoint_url and self.model):
            return None
        return EndpointConfig(
            base_url=self.endpoint_url,
            model_name=self.model,
            timeout_s=self.timeout_s,
            max_retries=self.max_retries,
            max_concurrency=self.max_concurrency,
            api_key_env=self.api_key_env,
        )

    def to_dict(self) -> dict[str, Any]:
        """Plain-data view; the endpoint token itself is never part of it."""
        data = asdict(self)
        for name, value in data.items():
            if isinstance(value, Path):
                data[name] = str(value)
        data["context"] = self.context.value
        return data

    def fingerprint(self) -> str:
        """SHA-256 over canonical JSON of the output-affecting settings."""
        data = {
            k: v for k, v in self.to_dict().items() if k not in _NON_FINGERPRINT_FIELDS
        }
        canonical = json.dumps(data, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(name: str, value: Any) -> Any:
    kind = str(_FIELD_TYPES[name])
    try:
        if kind == "float":
            return float(value)
        if kind == "int":
            return int(value)
        if kind == "bool" and isinstance(value, str):
            return value.strip().lower() in ("1", "true", "yes", "on")
    except (TypeError, ValueError) as e:
        raise RunConfigError(f"Invalid value {value!r} for '{name}': {e}") from e
    return value


def load_config_file(path: str | Path) -> dict[str, Any]:
    """Read a YAML mapping of RunConfig fields (dashes or underscores).

    Raises:
        RunConfigError: If the file is missing, not a mapping or has unknown keys.
    """
    source = Path(path)
    if not source.is_file():
        raise RunConfigError(f"Config file '{source}' does not exist.")
    try:
        raw = yaml.safe_load(source.read_text(encoding="utf-8"))
    except yaml.YAMLError as e:
        raise RunConfigError(f"Config file '{source}' is not valid YAML: {e}") from e
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise RunConfigError(f"Config file '{source}' must contain a mapping.")
    data = {str(k).replace("-", "_"): v for k, v in cast(dict[Any, Any], raw).items()}
    unknown = sorted(set(data) - set(_FIELD_TYPES))
    if unknown:
        raise RunConfigError(
            f"Config file '{source}' has unknown keys: {', '.join(unknown)}."
        )
    return data


def config_from_env(environ: Mapping[str, str] | None = None) -> dict[str, Any]:
    """RunConfig values from `CUFFLESS_*` variables."""
    environ = os.environ if environ is None else environ
    return {
        name: environ[ENV_PREFIX + key]
        for key, name in ENV_FIELDS.items()
        if environ.get(ENV_PREFIX + key)
    }


def resolve_run_config(
    flags: Mapping[str, Any] | None = None,
    config_file: str | Path | None = None,
    environ: Mapping[str, str] | None = None,
) -> RunConfig:
    """Merge the configuration layers; None-valued flags are treated as unset.

    Raises:
        RunConfigError: For invalid values or unknown keys.
    """
    merged: dict[str, Any] = {}
    merged.update(config_from_env(environ))
    if config_file is not None:
        merged.update(load_config_file(config_file))
        merged["config_file"] = Path(config_file)
    merged.update({k: v for k, v in (flags or {}).items() if v is not None})

    unknown = sorted(set(merged) - set(_FIELD_TYPES))
    if unknown:
        raise RunConfigError(f"Unknown configuration keys: {', '.join(unknown)}.")
    values = {name: _coerce(name, value) for name, value in merged.items()}
    return RunConfig(**values)
