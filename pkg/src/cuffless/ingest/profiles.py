"""YAML manifests of subject profiles."""

from __future__ import annotations

from pathlib import Path
from typing import Any, Mapping, cast

import yaml

from ..exceptions import RecordError, RecordParsingError, RecordSourceError
from ..records import UserProfile

PROFILE_FIELDS = ("age_years", "gender", "height_cm", "weight_kg", "hypertension_history")


def profile_from_dict(subject_id: str, data: Mapping[str, Any]) -> UserProfile:
    """Build a profile from its manifest entry.

    Raises:
        RecordParsingError: If a field is missing or mistyped.
        RecordValidationError: If a value is out of range.
    """
    missing = [name for name in PROFILE_FIELDS if name not in data]
    if missing:
        raise RecordParsingError(
            f"Profile '{subject_id}': missing field(s) {', '.join(missing)}."
        )
    history = data["hypertension_history"]
    if not isinstance(history, bool):
        raise RecordParsingError(
            f"Profile '{subject_id}': hypertension_history must be true or false."
        )
    try:
        return UserProfile(
            age_years=float(data["age_years"]),
            gender=str(data["gender"]),  # type: ignore[arg-type]
            height_cm=float(data["height_cm"]),
            weight_kg=float(data["weight_kg"]),
            hypertension_history=history,
        )
    except (TypeError, ValueError) as e:
        raise RecordParsingError(f"Profile '{subject_id}': {e}") from e


def load_profiles(path: str | Path) -> dict[str, UserProfile]:
    """Load a mapping of subject id to profile from a YAML file.

    Example manifest::

        S001:
          age_years: 56
          gender: female
          height_cm: 155.0
          weight_kg: 54.0
          hypertension_history: false

    Raises:
        RecordSourceError: If the file does not exist.
        RecordParsingError: If the YAML is not a mapping of profiles.
    """
    source = Path(path)
    if not source.is_file():
        raise RecordSourceError(f"Profile manifest '{source}' does not exist.")
    try:
        raw = yaml.safe_load(source.read_text(encoding="utf-8"))
    except yaml.YAMLError as e:
        raise RecordParsingError(f"Profile manifest '{source}' is not valid YAML: {e}") from e
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise RecordParsingError(f"Profile manifest '{source}' must be a mapping.")

    profiles: dict[str, UserProfile] = {}
    for key, entry in cast(dict[Any, Any], raw).items():
        subject_id = str(key)
        if not isinstance(entry, dict):
            raise RecordParsingError(f"Profile '{subject_id}' must be a mapping.")
        try:
            profiles[subject_id] = profile_from_dict(
                subject_id, cast(dict[str, Any], entry)
            )
        except RecordParsingError:
            raise
        except RecordError as e:
            raise RecordParsingError(f"{source.name}: {e}") from e
    return profiles


def write_profiles(profiles: Mapping[str, UserProfile], path: str | Path) -> Path:
    """Write profiles as a YAML manifest, sorted by subject id."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    data = {sid: profiles[sid].to_dict() for sid in sorted(profiles)}
    target.write_text(
        yaml.safe_dump(data, sort_keys=False, default_flow_style=False),
        encoding="utf-8",
    )
    return target
