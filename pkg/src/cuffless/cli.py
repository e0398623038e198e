"""Command-line entry point: `cuffless <command> [options]`.

Commands:
    synthesize     Write a synthetic cohort (records + profiles).
    extract        Records -> feature table.
    build-prompts  Feature table -> one tuning dataset per context level.
    export-tuning  Feature table -> per-fold training datasets and test prompts.
    evaluate       Feature table -> cross-validated report and plot data.
    sweep          Like evaluate, for an alpha, training-size or context sweep.

Exit codes: 0 on success, 1 on a fatal pipeline error, 2 on usage errors and
missing input paths.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Sequence, cast

import yaml

from . import __version__
from .config import SWEEPS, RunConfig, resolve_run_config
from .estimation.baselines import BaselineKind, train_baseline
from .evaluation.estimators import ESTIMATOR_NAMES, make_estimator
from .evaluation.experiment import (
    EvaluationReport,
    basal_by_subject,
    run_experiment,
    sweep_alpha,
    sweep_context,
    sweep_training_size,
)
from .evaluation.export import write_plot_data, write_report, write_sweep_summary
from .evaluation.folds import make_folds
from .exceptions import CufflessError, RunConfigError
from .features.pipeline import ExtractionSettings, extract_features
from .features.table import read_feature_table, write_feature_table
from .features.vectors import FeatureVector
from .ingest import (
    RecordFormat,
    RecordLoaderConfig,
    infer_format,
    load_profiles,
    load_records,
    synthesize_cohort,
    write_csv_dir_records,
    write_ndjson_records,
    write_profiles,
)
from .ingest.base import LoaderMode
from .prompting.builder import (
    PromptBuilderConfig,
    build_prompt,
    build_tuning_record,
    build_tuning_records,
)
from .prompting.export import write_prompt_file, write_tuning_dataset
from .prompting.templates import ContextLevel
from .registries import FileSystemRegistry

logger = logging.getLogger("cuffless.cli")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

MANIFEST_NAME = "run_manifest.yaml"
CONTEXT_CHOICES = [level.cli_name for level in ContextLevel]


class InputPathError(Exception):
    """An input path given on the command line does not exist."""


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="YAML run configuration file")
    common.add_argument("--out", type=Path, help="Output directory")
    common.add_argument("--seed", type=int, help="Seed for folds, sampling and training")
    common.add_argument("--jobs", type=int, help="Worker threads")
    common.add_argument(
        "--verbose", action="store_true", default=None, help="Enable debug logging"
    )
    return common


def _add_prompt_options(parser: argparse.ArgumentParser, *, multiple: bool) -> None:
    if multiple:
        parser.add_argument(
            "--context",
            action="append",
            choices=CONTEXT_CHOICES,
            help="Context level; repeat for several (default: all three)",
        )
    else:
        parser.add_argument("--context", choices=CONTEXT_CHOICES, help="Context level")
    parser.add_argument("--grouping", choices=["table1", "appendixB"], help="Feature grouping")


def _add_evaluation_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", type=Path, help="Feature table (CSV)")
    parser.add_argument("--estimator", choices=list(ESTIMATOR_NAMES))
    parser.add_argument("--alpha", type=float, help="Calibration weight in [0, 1]")
    parser.add_argument("--folds", type=int, help="Cross-validation folds")
    parser.add_argument("--endpoint-url", dest="endpoint_url")
    parser.add_argument("--model", help="Served model name")
    parser.add_argument("--split-unit", dest="split_unit", choices=["subject", "record"])
    parser.add_argument(
        "--include-calibration-visits",
        dest="include_calibration_visits",
        action="store_true",
        default=None,
        help="Also score day-D visits",
    )
    parser.add_argument(
        "--registry", type=str, help="Register a full-data baseline model under this path"
    )
    _add_prompt_options(parser, multiple=False)


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="cuffless",
        description="Cuffless blood pressure estimation from ECG and PPG.",
    )
    parser.add_argument("--version", action="version", version=f"cuffless {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    synth = sub.add_parser("synthesize", parents=[common], help="Write a synthetic cohort")
    synth.add_argument("--subjects", type=int, default=20)
    synth.add_argument("--duration", type=float, default=120.0, help="Seconds per record")
    synth.add_argument("--sampling-rate", dest="sampling_rate", type=float, default=1000.0)
    synth.add_argument("--noise", type=float, default=0.0, help="Signal noise std")
    synth.add_argument("--format", choices=["ndjson", "csv-dir"])

    extract = sub.add_parser("extract", parents=[common], help="Extract features")
    extract.add_argument("--input", type=Path, help="NDJSON file or CSV record directory")
    extract.add_argument("--format", choices=["ndjson", "csv-dir"])
    extract.add_argument("--profiles", type=Path, help="Subject profile manifest")
    extract.add_argument("--min-beats", dest="min_beats", type=int)
    extract.add_argument("--max-flatline-s", dest="max_flatline_s", type=float)
    extract.add_argument(
        "--max-clipped-fraction", dest="max_clipped_fraction", type=float
    )
    extract.add_argument("--flatline-tolerance", dest="flatline_tolerance", type=float)
    extract.add_argument(
        "--skip-malformed",
        dest="loader_mode",
        action="store_const",
        const="skip",
        help="Skip malformed records instead of failing",
    )

    prompts = sub.add_parser("build-prompts", parents=[common], help="Build tuning datasets")
    prompts.add_argument("--input", type=Path, help="Feature table (CSV)")
    _add_prompt_options(prompts, multiple=True)

    tuning = sub.add_parser(
        "export-tuning", parents=[common], help="Per-fold tuning datasets and test prompts"
    )
    tuning.add_argument("--input", type=Path, help="Feature table (CSV)")
    tuning.add_argument("--folds", type=int)
    _add_prompt_options(tuning, multiple=False)

    evaluate = sub.add_parser("evaluate", parents=[common], help="Cross-validated report")
    _add_evaluation_options(evaluate)
    evaluate.add_argument("--sweep", choices=list(SWEEPS))

    sweep = sub.add_parser("sweep", parents=[common], help="Run a sweep")
    sweep.add_argument("sweep", choices=list(SWEEPS))
    _add_evaluation_options(sweep)
    return parser


# Argparse destinations that are not RunConfig fields.
_COMMAND_ONLY = frozenset(
    {"command", "config", "subjects", "duration", "sampling_rate", "noise", "registry"}
)


def _resolve(args: argparse.Namespace) -> RunConfig:
    flags = {k: v for k, v in vars(args).items() if k not in _COMMAND_ONLY}
    contexts = flags.get("context")
    if isinstance(contexts, list):
        flags["context"] = contexts[0] if len(contexts) == 1 else None
    return resolve_run_config(flags, config_file=args.config)


def _require_input(path: Path | None) -> Path:
    if path is None:
        raise RunConfigError("No --input given.")
    if not path.exists():
        raise InputPathError(f"Input path '{path}' does not exist.")
    return path


def _require_out(config: RunConfig) -> Path:
    if config.out is None:
        raise RunConfigError("No --out directory given.")
    config.out.mkdir(parents=True, exist_ok=True)
    return config.out


def write_manifest(
    out: Path, command: str, config: RunConfig, artifacts: Sequence[Path], **extra: Any
) -> Path:
    """Write the run manifest sidecar next to the artifacts."""
    manifest: dict[str, Any] = {
        "tool_version": __version__,
        "command": command,
        "fingerprint": config.fingerprint(),
        "seed": config.seed,
        "artifacts": sorted(p.name for p in artifacts),
        "config": config.to_dict(),
    }
    manifest.update(extra)
    path = out / MANIFEST_NAME
    path.write_text(
        yaml.safe_dump(manifest, sort_keys=False, default_flow_style=False),
        encoding="utf-8",
    )
    return path


def cmd_synthesize(args: argparse.Namespace, config: RunConfig) -> int:
    out = _require_out(config)
    cohort = synthesize_cohort(
        args.subjects,
        duration_s=args.duration,
        sampling_rate_hz=args.sampling_rate,
        noise_std=args.noise,
        seed=config.seed,
    )
    if config.format == "csv-dir":
        records_path = write_csv_dir_records(cohort.records, out / "records")
    else:
        records_path = write_ndjson_records(cohort.records, out / "records.ndjson")
    profiles_path = write_profiles(cohort.profiles, out / "profiles.yaml")
    write_manifest(
        out,
        "synthesize",
        config,
        [records_path, profiles_path],
        subjects=args.subjects,
        duration_s=args.duration,
        sampling_rate_hz=args.sampling_rate,
        noise_std=args.noise,
    )
    logger.info(f"Wrote {len(cohort.records)} records to {records_path}")
    return EXIT_OK


def cmd_extract(args: argparse.Namespace, config: RunConfig) -> int:
    source = _require_input(config.input)
    profiles = load_profiles(_require_input(config.profiles)) if config.profiles else {}
    out = _require_out(config)
    records = load_records(
        source,
        cast(RecordFormat, config.format or infer_format(source)),
        config=RecordLoaderConfig(mode=cast(LoaderMode, config.loader_mode)),
    )
    result = extract_features(
        records,
        profiles,
        settings=ExtractionSettings(thresholds=config.thresholds),
        jobs=config.jobs,
    )
    table = write_feature_table(result.vectors, out / "features.csv")
    write_manifest(
        out,
        "extract",
        config,
        [table],
        records=len(records),
        accepted=len(result.vectors),
        rejected=[
            {"record": f"{f.subject_id}/{f.visit_day}", "message": f.message}
            for f in result.faults
        ],
    )
    logger.info(
        f"Wrote {len(result.vectors)} feature rows to {table} "
        f"({len(result.faults)} of {len(records)} records rejected)"
    )
    return EXIT_OK


def _levels(args: argparse.Namespace) -> list[ContextLevel]:
    requested = args.context or CONTEXT_CHOICES
    return sorted({ContextLevel.parse(c) for c in requested}, key=list(ContextLevel).index)


def cmd_build_prompts(args: argparse.Namespace, config: RunConfig) -> int:
    vectors = read_feature_table(_require_input(config.input))
    out = _require_out(config)
    artifacts: list[Path] = []
    for level in _levels(args):
        records = build_tuning_records(
            vectors, PromptBuilderConfig(level=level, grouping=config.grouping_config)
        )
        artifacts.append(write_tuning_dataset(records, out / f"tuning_{level.cli_name}.jsonl"))
        logger.info(f"Wrote {len(records)} {level.cli_name} tuning records")
    write_manifest(out, "build-prompts", config, artifacts)
    return EXIT_OK


def cmd_export_tuning(args: argparse.Namespace, config: RunConfig) -> int:
    vectors = read_feature_table(_require_input(config.input))
    out = _require_out(config)
    basal, _ = basal_by_subject(vectors)
    subjects = [fv.subject_id for fv in vectors if fv.subject_id in basal]
    plan = make_folds(subjects, config.folds, config.seed)
    level, grouping = config.context, config.grouping_config
    artifacts: list[Path] = []
    for fold in range(plan.k):
        train: list[FeatureVector] = []
        test: list[FeatureVector] = []
        for fv in vectors:
            assigned = plan.fold_of(fv.subject_id, fv.visit_day)
            if assigned is None:
                continue
            (test if assigned == fold else train).append(fv)
        tuning = [
            build_tuning_record(
                build_prompt(fv, level, grouping), fv.ref_sbp_mmhg, fv.ref_dbp_mmhg
            )
            for fv in train
        ]
        prompts = [build_prompt(fv, level, grouping) for fv in test]
        artifacts.append(
            write_tuning_dataset(tuning, out / f"fold{fold}_train_{level.cli_name}.jsonl")
        )
        artifacts.append(
            write_prompt_file(prompts, out / f"fold{fold}_test_{level.cli_name}.jsonl")
        )
    write_manifest(
        out, "export-tuning", config, artifacts, fold_assignments=dict(plan.assignments)
    )
    logger.info(f"Wrote {plan.k} fold datasets to {out}")
    return EXIT_OK


def _register_baseline(config: RunConfig, vectors: list[FeatureVector], where: str) -> None:
    if config.estimator not in ("dtr", "adaboost"):
        logger.warning(f"--registry ignored: '{config.estimator}' has no trained state")
        return
    model = train_baseline(
        BaselineKind(config.estimator), vectors, config.hyperparameters, config.seed
    )
    version = FileSystemRegistry(where).register(config.estimator, model)
    logger.info(f"Registered {config.estimator} version {version} at {where}")


def _write_evaluation(out: Path, stem: str, report: EvaluationReport) -> list[Path]:
    return [write_report(report, out / f"{stem}.yaml"), *write_plot_data(report, out, stem)]


def cmd_evaluate(args: argparse.Namespace, config: RunConfig) -> int:
    vectors = read_feature_table(_require_input(config.input))
    out = _require_out(config)
    experiment = config.experiment_config()
    fingerprint = config.fingerprint()
    estimator_kwargs: dict[str, Any] = {
        "hyper": config.hyperparameters,
        "endpoint": config.endpoint_config(),
        "level": config.context,
        "grouping": config.grouping_config,
    }
    artifacts: list[Path] = []

    if config.sweep is None:
        estimator = make_estimator(config.estimator, **estimator_kwargs)
        report = run_experiment(vectors, estimator, experiment, fingerprint=fingerprint)
        artifacts += _write_evaluation(out, "report", report)
        _log_report(report)
    else:
        results: list[tuple[Any, EvaluationReport]]
        if config.sweep == "alpha":
            estimator = make_estimator(config.estimator, **estimator_kwargs)
            results = list(
                sweep_alpha(vectors, estimator, config=experiment, fingerprint=fingerprint)
            )
        elif config.sweep == "train-size":
            if config.estimator not in ("dtr", "adaboost"):
                raise RunConfigError(
                    "The training-size sweep applies to the dtr and adaboost estimators."
                )
            results = list(
                sweep_training_size(
                    vectors,
                    config.estimator,
                    config=experiment,
                    hyper=config.hyperparameters,
                    fingerprint=fingerprint,
                )
            )
        else:
            endpoint = config.endpoint_config()
            if endpoint is None:
                raise RunConfigError(
                    "The context sweep needs an endpoint.",
                    suggestions=["Pass --endpoint-url and --model"],
                )
            results = list(
                sweep_context(
                    vectors,
                    endpoint,
                    config=experiment,
                    grouping=config.grouping_config,
                    fingerprint=fingerprint,
                )
            )
        for value, report in results:
            stem = f"{config.sweep}_{getattr(value, 'cli_name', value)}"
            artifacts += _write_evaluation(out, stem, report)
        artifacts.append(
            write_sweep_summary(config.sweep, results, out / f"sweep_{config.sweep}.csv")
        )
        logger.info(f"Completed {config.sweep} sweep with {len(results)} points")

    if args.registry:
        _register_baseline(config, vectors, args.registry)
    write_manifest(out, args.command, config, artifacts)
    return EXIT_OK


def _log_report(report: EvaluationReport) -> None:
    for bp_type, metrics in (("SBP", report.pooled_sbp), ("DBP", report.pooled_dbp)):
        logger.info(
            f"{report.estimator} {bp_type}: MAE {metrics.mae_mmhg:.2f}, "
            f"ME {metrics.me_mmhg:.2f}, SDE {metrics.sde_mmhg:.2f} mmHg (n={metrics.n})"
        )
    if report.faults:
        logger.warning(f"{len(report.faults)} records could not be estimated")


COMMANDS: dict[str, Callable[[argparse.Namespace, RunConfig], int]] = {
    "synthesize": cmd_synthesize,
    "extract": cmd_extract,
    "build-prompts": cmd_build_prompts,
    "export-tuning": cmd_export_tuning,
    "evaluate": cmd_evaluate,
    "sweep": cmd_evaluate,
}


def configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )


def main(argv: Sequence[str] | None = None) -> int:
    """Run the command line and return the exit code."""
    args = build_parser().parse_args(argv)
    configure_logging(bool(args.verbose))
    try:
        if args.config is not None and not args.config.exists():
            raise InputPathError(f"Config file '{args.config}' does not exist.")
        config = _resolve(args)
        return COMMANDS[args.command](args, config)
    except (InputPathError, RunConfigError) as e:
        logger.error(str(e))
        return EXIT_USAGE
    except CufflessError as e:
        logger.error(str(e))
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
