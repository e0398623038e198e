"""Record loading, synthesis and quality screening.

- `load_records`: Load records from an NDJSON file or a CSV directory.
- `load_profiles`: Load the subject profile manifest.
- `synthesize_record` / `synthesize_cohort`: Ground-truth-bearing test data.
- `screen_quality`: Accept or reject a record from its detected beats.
"""

from __future__ import annotations

from pathlib import Path
from typing import Literal

from ..exceptions import RecordSourceError
from ..records import SignalRecord
from .base import BaseRecordLoader, RecordLoaderConfig
from .csv_dir_loader import CsvDirRecordLoader, write_csv_dir_records
from .ndjson_loader import NdjsonRecordLoader, write_ndjson_records
from .profiles import load_profiles, write_profiles
from .quality import QualityReason, QualityReport, QualityThresholds, screen_quality
from .synthetic import (
    GroundTruth,
    GroundTruthBeat,
    SyntheticCohort,
    SyntheticConfig,
    synthesize_cohort,
    synthesize_record,
)

RecordFormat = Literal["ndjson", "csv-dir"]

__all__ = [
    "load_records",
    "infer_format",
    "load_profiles",
    "write_profiles",
    "write_ndjson_records",
    "write_csv_dir_records",
    "synthesize_record",
    "synthesize_cohort",
    "screen_quality",
    "BaseRecordLoader",
    "RecordLoaderConfig",
    "NdjsonRecordLoader",
    "CsvDirRecordLoader",
    "QualityReason",
    "QualityReport",
    "QualityThresholds",
    "GroundTruth",
    "GroundTruthBeat",
    "SyntheticCohort",
    "SyntheticConfig",
]


def infer_format(path: str | Path) -> RecordFormat:
    """Guess the record format from the path kind: directories are "csv-dir"."""
    return "csv-dir" if Path(path).is_dir() else "ndjson"


def load_records(
    path: str | Path,
    format: RecordFormat = "ndjson",
    *,
    config: RecordLoaderConfig | None = None,
) -> list[SignalRecord]:
    """Load records in deterministic subject/visit order.

    Args:
        path: NDJSON file or CSV record directory.
        format: "ndjson" or "csv-dir".
        config: Loader configuration; "skip" mode drops malformed records.

    Returns:
        Every parseable record, sorted by subject id then chronological visit.

    Raises:
        RecordSourceError: If the path is missing or does not match `format`.
        RecordError: For malformed records in "raise" mode.
    """
    loader: BaseRecordLoader
    if format == "ndjson":
        loader = NdjsonRecordLoader(config)
    elif format == "csv-dir":
        loader = CsvDirRecordLoader(config)
    else:
        raise RecordSourceError(
            f"Unknown record format '{format}'. Expected 'ndjson' or 'csv-dir'."
        )
    return loader.load(path)
