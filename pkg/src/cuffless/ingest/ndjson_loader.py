"""Newline-delimited JSON record files."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterable, cast

from ..exceptions import RecordError, RecordParsingError
from ..records import SignalRecord, sort_records
from .base import BaseRecordLoader

RECORD_FIELDS = ("subject_id", "visit_day", "fs", "ecg", "ppg", "sbp", "dbp")


def record_from_dict(data: dict[str, Any], *, where: str) -> SignalRecord:
    """Build a record from one parsed line of the on-disk schema.

    Args:
        data: Object with exactly the fields subject_id, visit_day, fs, ecg,
            ppg, sbp and dbp.
        where: Location label used in error messages, e.g. "records.ndjson:3".

    Raises:
        RecordParsingError: If fields are missing, unexpected or mistyped.
        RecordValidationError: If the record violates its invariants.
    """
    missing = [name for name in RECORD_FIELDS if name not in data]
    if missing:
        raise RecordParsingError(f"{where}: missing field(s) {', '.join(missing)}.")
    extra = sorted(set(data) - set(RECORD_FIELDS))
    if extra:
        raise RecordParsingError(f"{where}: unexpected field(s) {', '.join(extra)}.")

    for name in ("ecg", "ppg"):
        if not isinstance(data[name], list):
            raise RecordParsingError(f"{where}: field '{name}' must be an array.")
    for name in ("fs", "sbp", "dbp"):
        value = data[name]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise RecordParsingError(f"{where}: field '{name}' must be a number.")

    return SignalRecord(
        subject_id=str(data["subject_id"]),
        visit_day=data["visit_day"],
        sampling_rate_hz=float(data["fs"]),
        ecg=data["ecg"],
        ppg=data["ppg"],
        ref_sbp_mmhg=float(data["sbp"]),
        ref_dbp_mmhg=float(data["dbp"]),
    )


class NdjsonRecordLoader(BaseRecordLoader):
    """Loads records from a file with one JSON object per line.

    Blank lines are ignored. Each object carries exactly the fields
    subject_id, visit_day, fs, ecg, ppg, sbp and dbp, with the sample arrays
    inline.
    """

    def _load_unsorted(self, source: Path) -> list[SignalRecord]:
        records: list[SignalRecord] = []
        with self.load_context(source=str(source)):
            with source.open("r", encoding="utf-8") as f:
                for line_number, line in enumerate(f, start=1):
                    if not line.strip():
                        continue
                    where = f"{source.name}:{line_number}"
                    try:
                        records.append(self._parse_line(line, where))
                    except RecordError as e:
                        self._handle(e)
        return records

    def _parse_line(self, line: str, where: str) -> SignalRecord:
        try:
            raw = json.loads(line)
        except json.JSONDecodeError as e:
            raise RecordParsingError(f"{where}: invalid JSON ({e.msg}).") from e
        if not isinstance(raw, dict):
            raise RecordParsingError(f"{where}: expected a JSON object.")
        data = cast(dict[str, Any], raw)
        try:
            return record_from_dict(data, where=where)
        except RecordParsingError:
            raise
        except RecordError as e:
            raise type(e)(f"{where}: {e}") from e


def record_to_dict(record: SignalRecord) -> dict[str, Any]:
    """On-disk representation of `record`."""
    return {
        "subject_id": record.subject_id,
        "visit_day": record.visit_day.value,
        "fs": record.sampling_rate_hz,
        "ecg": record.ecg.tolist(),
        "ppg": record.ppg.tolist(),
        "sbp": record.ref_sbp_mmhg,
        "dbp": record.ref_dbp_mmhg,
    }


def write_ndjson_records(records: Iterable[SignalRecord], path: str | Path) -> Path:
    """Write records, sorted by subject and visit, one JSON object per line."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with target.open("w", encoding="utf-8") as f:
        for record in sort_records(list(records)):
            f.write(json.dumps(record_to_dict(record), separators=(",", ":")))
            f.write("\n")
    return target
