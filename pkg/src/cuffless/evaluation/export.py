"""Report and plot-data files."""

from __future__ import annotations

from pathlib import Path
from typing import Any, Sequence

import polars as pl
import yaml

from ..serializers import ReportSerializer
from .experiment import EvaluationReport

_POINT_SCHEMA: dict[str, Any] = {
    "bp_type": pl.String,
    "subject_id": pl.String,
    "visit_day": pl.String,
}
BLAND_ALTMAN_SCHEMA = _POINT_SCHEMA | {"mean_mmhg": pl.Float64, "diff_mmhg": pl.Float64}
CORRELATION_SCHEMA = _POINT_SCHEMA | {"ref_mmhg": pl.Float64, "est_mmhg": pl.Float64}


def report_to_yaml(report: EvaluationReport) -> str:
    from .. import __version__

    payload = ReportSerializer().serialize(report, tool_version=__version__)
    return yaml.safe_dump(payload, sort_keys=False, default_flow_style=False)


def write_report(report: EvaluationReport, path: str | Path) -> Path:
    """Write the full report as YAML."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(report_to_yaml(report), encoding="utf-8")
    return target


def bland_altman_frame(report: EvaluationReport) -> pl.DataFrame:
    """(mean, difference) points per BP type, difference = ref - est."""
    rows: list[dict[str, Any]] = []
    for bp_type, agreement in (
        ("sbp", report.bland_altman_sbp),
        ("dbp", report.bland_altman_dbp),
    ):
        points = zip(report.records, agreement.means, agreement.differences)
        for record, mean, diff in points:
            rows.append(
                {
                    "bp_type": bp_type,
                    "subject_id": record.subject_id,
                    "visit_day": record.visit_day,
                    "mean_mmhg": mean,
                    "diff_mmhg": diff,
                }
            )
    return pl.DataFrame(rows, schema=BLAND_ALTMAN_SCHEMA)


def correlation_frame(report: EvaluationReport) -> pl.DataFrame:
    """(reference, estimate) pairs per BP type."""
    rows: list[dict[str, Any]] = []
    for record in report.records:
        rows.append(
            {
                "bp_type": "sbp",
                "subject_id": record.subject_id,
                "visit_day": record.visit_day,
                "ref_mmhg": record.ref_sbp_mmhg,
                "est_mmhg": record.est_sbp_mmhg,
            }
        )
    for record in report.records:
        rows.append(
            {
                "bp_type": "dbp",
                "subject_id": record.subject_id,
                "visit_day": record.visit_day,
                "ref_mmhg": record.ref_dbp_mmhg,
                "est_mmhg": record.est_dbp_mmhg,
            }
        )
    return pl.DataFrame(rows, schema=CORRELATION_SCHEMA)


def write_plot_data(
    report: EvaluationReport, directory: str | Path, stem: str = ""
) -> list[Path]:
    """Write `bland_altman.csv` and `correlation.csv` into `directory`."""
    target = Path(directory)
    target.mkdir(parents=True, exist_ok=True)
    prefix = f"{stem}_" if stem else ""
    ba_path = target / f"{prefix}bland_altman.csv"
    corr_path = target / f"{prefix}correlation.csv"
    bland_altman_frame(report).write_csv(ba_path)
    correlation_frame(report).write_csv(corr_path)
    return [ba_path, corr_path]


def sweep_frame(sweep: str, results: Sequence[tuple[Any, EvaluationReport]]) -> pl.DataFrame:
    """One row per sweep point with pooled metrics for both BP types."""
    rows: list[dict[str, Any]] = []
    for value, report in results:
        row: dict[str, Any] = {
            "sweep": sweep,
            "value": str(getattr(value, "value", value)),
            "estimator": report.estimator,
            "alpha": report.alpha,
            "n": report.pooled_sbp.n,
        }
        for bp_type, metrics in (("sbp", report.pooled_sbp), ("dbp", report.pooled_dbp)):
            row[f"{bp_type}_mae_mmhg"] = metrics.mae_mmhg
            row[f"{bp_type}_me_mmhg"] = metrics.me_mmhg
            row[f"{bp_type}_sde_mmhg"] = metrics.sde_mmhg
        rows.append(row)
    return pl.DataFrame(rows)


def write_sweep_summary(
    sweep: str, results: Sequence[tuple[Any, EvaluationReport]], path: str | Path
) -> Path:
    """Write the sweep table as CSV."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    sweep_frame(sweep, results).write_csv(target)
    return target
