"""Serialization of evaluation reports to plain dictionaries."""

from __future__ import annotations

from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from ..evaluation.experiment import EvaluationReport, FoldMetrics
    from ..evaluation.metrics import BlandAltman, MetricSet

REPORT_FORMAT_VERSION = 1


class ReportSerializer:
    """Serialize `EvaluationReport` instances for the YAML report file.

    Args:
        include_records: Also emit every scored record.
    """

    def __init__(self, *, include_records: bool = True) -> None:
        self.include_records = include_records

    def serialize(self, report: EvaluationReport, *, tool_version: str) -> dict[str, Any]:
        payload: dict[str, Any] = {
            "format_version": REPORT_FORMAT_VERSION,
            "tool_version": tool_version,
            "fingerprint": report.fingerprint,
            "estimator": report.estimator,
            "alpha": report.alpha,
            "folds": {
                "k": report.plan.k,
                "seed": report.plan.seed,
                "unit": report.plan.unit,
                "sizes": report.plan.fold_sizes(),
            },
            "pooled": {
                "sbp": self._metrics(report.pooled_sbp),
                "dbp": self._metrics(report.pooled_dbp),
            },
            "fold_averaged": {
                "sbp": self._metrics(report.averaged_sbp),
                "dbp": self._metrics(report.averaged_dbp),
            },
            "per_fold": [self._fold(m) for m in report.per_fold],
            "correlation": {"sbp": report.pearson_sbp, "dbp": report.pearson_dbp},
            "bland_altman": {
                "sbp": self._agreement(report.bland_altman_sbp),
                "dbp": self._agreement(report.bland_altman_dbp),
            },
            "clamped_predictions": report.n_clamped,
            "excluded": {
                "subjects": list(report.excluded_subjects),
                "records": report.excluded_records,
            },
            "faults": [{"record": f.label, "message": f.message} for f in report.faults],
        }
        if self.include_records:
            payload["records"] = [
                {
                    "subject_id": r.subject_id,
                    "visit_day": r.visit_day,
                    "fold": r.fold,
                    "ref_sbp_mmhg": r.ref_sbp_mmhg,
                    "ref_dbp_mmhg": r.ref_dbp_mmhg,
                    "est_sbp_mmhg": r.est_sbp_mmhg,
                    "est_dbp_mmhg": r.est_dbp_mmhg,
                    "clamped": r.clamped,
                }
                for r in report.records
            ]
        return payload

    @staticmethod
    def _metrics(metrics: MetricSet | None) -> dict[str, float | int] | None:
        return metrics.to_dict() if metrics is not None else None

    def _fold(self, fold: FoldMetrics) -> dict[str, Any]:
        return {
            "fold": fold.fold,
            "n_train": fold.n_train,
            "n_test": fold.n_test,
            "sbp": self._metrics(fold.sbp),
            "dbp": self._metrics(fold.dbp),
        }

    @staticmethod
    def _agreement(agreement: BlandAltman) -> dict[str, float]:
        return {
            "bias_mmhg": agreement.bias_mmhg,
            "lower_loa_mmhg": agreement.lower_loa_mmhg,
            "upper_loa_mmhg": agreement.upper_loa_mmhg,
        }
