"""Directory-of-CSV record layout for long signals.

Layout::

    {root}/
    ├── manifest.csv            subject_id, visit_day, fs, sbp, dbp
    └── {subject_id}/
        ├── D.csv               ecg, ppg
        ├── D7.csv
        └── ...

The manifest holds one row per visit with its reference reading; each signal
file holds the synchronized samples of that visit.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

import polars as pl

from ..exceptions import RecordError, RecordParsingError, RecordSourceError
from ..records import SignalRecord, VisitDay, sort_records
from .base import BaseRecordLoader

MANIFEST_NAME = "manifest.csv"
MANIFEST_COLUMNS = ("subject_id", "visit_day", "fs", "sbp", "dbp")
SIGNAL_COLUMNS = ("ecg", "ppg")


class CsvDirRecordLoader(BaseRecordLoader):
    """Loads records from a manifest plus one signal CSV per visit."""

    expects_directory = True

    def _load_unsorted(self, source: Path) -> list[SignalRecord]:
        manifest_path = source / MANIFEST_NAME
        if not manifest_path.is_file():
            raise RecordSourceError(
                f"Record directory '{source}' has no {MANIFEST_NAME}.",
                suggestions=[f"Columns: {', '.join(MANIFEST_COLUMNS)}"],
            )
        try:
            manifest = pl.read_csv(
                manifest_path,
                schema_overrides={"subject_id": pl.String, "visit_day": pl.String},
            )
        except (pl.exceptions.PolarsError, OSError) as e:
            raise RecordParsingError(f"{MANIFEST_NAME}: unreadable manifest ({e}).") from e
        missing = [c for c in MANIFEST_COLUMNS if c not in manifest.columns]
        if missing:
            raise RecordParsingError(
                f"{MANIFEST_NAME}: missing column(s) {', '.join(missing)}."
            )

        records: list[SignalRecord] = []
        for row_number, row in enumerate(manifest.iter_rows(named=True), start=2):
            where = f"{MANIFEST_NAME}:{row_number}"
            with self.load_context(source=where):
                try:
                    records.append(self._load_visit(source, row, where))
                except RecordError as e:
                    self._handle(e)
        return records

    def _load_visit(self, source: Path, row: dict[str, object], where: str) -> SignalRecord:
        for name in MANIFEST_COLUMNS:
            if row[name] is None:
                raise RecordParsingError(f"{where}: field '{name}' is empty.")
        subject_id = str(row["subject_id"])
        visit = VisitDay.parse(str(row["visit_day"]))
        signal_path = source / subject_id / f"{visit.value}.csv"
        if not signal_path.is_file():
            raise RecordParsingError(f"{where}: signal file '{signal_path}' not found.")
        try:
            signals = pl.read_csv(
                signal_path, schema_overrides={c: pl.Float64 for c in SIGNAL_COLUMNS}
            )
        except (pl.exceptions.PolarsError, OSError) as e:
            raise RecordParsingError(f"{signal_path.name}: unreadable signals ({e}).") from e
        missing = [c for c in SIGNAL_COLUMNS if c not in signals.columns]
        if missing:
            raise RecordParsingError(
                f"{signal_path}: missing column(s) {', '.join(missing)}."
            )
        if signals.select(SIGNAL_COLUMNS).null_count().sum_horizontal().item():
            raise RecordParsingError(f"{signal_path}: empty sample values.")

        try:
            return SignalRecord(
                subject_id=subject_id,
                visit_day=visit,
                sampling_rate_hz=float(str(row["fs"])),
                ecg=signals["ecg"].to_numpy(),
                ppg=signals["ppg"].to_numpy(),
                ref_sbp_mmhg=float(str(row["sbp"])),
                ref_dbp_mmhg=float(str(row["dbp"])),
            )
        except ValueError as e:
            raise RecordParsingError(f"{where}: {e}") from e


def write_csv_dir_records(records: Iterable[SignalRecord], root: str | Path) -> Path:
    """Write records in the directory-of-CSV layout."""
    target = Path(root)
    ordered = sort_records(list(records))
    for record in ordered:
        visit_dir = target / record.subject_id
        visit_dir.mkdir(parents=True, exist_ok=True)
        pl.DataFrame({"ecg": record.ecg, "ppg": record.ppg}).write_csv(
            visit_dir / f"{record.visit_day.value}.csv"
        )
    target.mkdir(parents=True, exist_ok=True)
    pl.DataFrame(
        {
            "subject_id": [r.subject_id for r in ordered],
            "visit_day": [r.visit_day.value for r in ordered],
            "fs": [r.sampling_rate_hz for r in ordered],
            "sbp": [r.ref_sbp_mmhg for r in ordered],
            "dbp": [r.ref_dbp_mmhg for r in ordered],
        },
        schema={
            "subject_id": pl.String,
            "visit_day": pl.String,
            "fs": pl.Float64,
            "sbp": pl.Float64,
            "dbp": pl.Float64,
        },
    ).write_csv(target / MANIFEST_NAME)
    return target
