"""Flat tabular export of feature vectors.

One row per record: identity, beat count, the 31 features, the subject
profile (empty when unknown) and the reference reading.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any, Iterable, Mapping

import polars as pl

from ..exceptions import FeatureError, RecordError
from ..ingest.profiles import PROFILE_FIELDS, profile_from_dict
from ..records import UserProfile
from .vectors import FEATURE_NAMES, FeatureVector

IDENTITY_COLUMNS = ("subject_id", "visit_day", "beat_count")
REFERENCE_COLUMNS = ("ref_sbp_mmhg", "ref_dbp_mmhg")

TABLE_SCHEMA: dict[str, Any] = {
    "subject_id": pl.String,
    "visit_day": pl.String,
    "beat_count": pl.Int64,
    **{name: pl.Float64 for name in FEATURE_NAMES},
    "age_years": pl.Float64,
    "gender": pl.String,
    "height_cm": pl.Float64,
    "weight_kg": pl.Float64,
    "hypertension_history": pl.Boolean,
    "ref_sbp_mmhg": pl.Float64,
    "ref_dbp_mmhg": pl.Float64,
}


def feature_frame(vectors: Iterable[FeatureVector]) -> pl.DataFrame:
    """Feature vectors as a DataFrame, sorted by subject and visit."""
    rows: list[dict[str, Any]] = []
    for fv in sorted(vectors, key=lambda v: v.key):
        row: dict[str, Any] = {
            "subject_id": fv.subject_id,
            "visit_day": fv.visit_day.value,
            "beat_count": fv.beat_count,
        }
        row.update(zip(FEATURE_NAMES, fv.values))
        profile = fv.user.to_dict() if fv.user else {}
        row.update({name: profile.get(name) for name in PROFILE_FIELDS})
        row["ref_sbp_mmhg"] = fv.ref_sbp_mmhg
        row["ref_dbp_mmhg"] = fv.ref_dbp_mmhg
        rows.append(row)
    return pl.DataFrame(rows, schema=TABLE_SCHEMA)


def write_feature_table(vectors: Iterable[FeatureVector], path: str | Path) -> Path:
    """Write feature vectors to a CSV file."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    feature_frame(vectors).write_csv(target)
    return target


def _profile(row: Mapping[str, Any]) -> UserProfile | None:
    values = {name: row.get(name) for name in PROFILE_FIELDS}
    if all(v is None for v in values.values()):
        return None
    if any(v is None for v in values.values()):
        raise FeatureError(
            f"Row for '{row['subject_id']}/{row['visit_day']}' has a partial profile."
        )
    return profile_from_dict(str(row["subject_id"]), values)


def read_feature_table(path: str | Path) -> list[FeatureVector]:
    """Read feature vectors written by `write_feature_table`.

    Raises:
        FeatureError: If the file is missing or a column is absent.
    """
    source = Path(path)
    if not source.is_file():
        raise FeatureError(f"Feature table '{source}' does not exist.")
    try:
        frame = pl.read_csv(source, schema_overrides=TABLE_SCHEMA)
    except (pl.exceptions.PolarsError, OSError) as e:
        raise FeatureError(f"Feature table '{source}' is unreadable: {e}") from e
    missing = [c for c in TABLE_SCHEMA if c not in frame.columns]
    if missing:
        raise FeatureError(
            f"Feature table '{source}' is missing column(s) {', '.join(missing)}."
        )

    vectors: list[FeatureVector] = []
    for line, row in enumerate(frame.iter_rows(named=True), start=2):
        try:
            vectors.append(
                FeatureVector(
                    values=tuple(row[name] for name in FEATURE_NAMES),
                    beat_count=int(row["beat_count"]),
                    subject_id=str(row["subject_id"]),
                    visit_day=row["visit_day"],
                    ref_sbp_mmhg=float(row["ref_sbp_mmhg"]),
                    ref_dbp_mmhg=float(row["ref_dbp_mmhg"]),
                    user=_profile(row),
                )
            )
        except (RecordError, FeatureError, TypeError) as e:
            raise FeatureError(f"{source.name}:{line}: {e}") from e
    return sorted(vectors, key=lambda v: v.key)
