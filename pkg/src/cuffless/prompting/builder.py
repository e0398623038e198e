"""Render feature vectors into prompt and instruction-tuning records."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any

from ..estimation.conversions import BPReading, map_pp_from_reading
from ..exceptions import InvalidReadingError, PromptError, ProfileMissingError
from ..features.grouping import (
    TABLE1_GROUPING,
    GroupedFeatures,
    GroupingConfig,
    get_grouping,
    group_features,
)
from ..features.vectors import FeatureVector
from ..records import UserProfile, VisitDay
from .formatting import format_feature_list, format_reading, format_value
from .templates import INSTRUCTION, QUESTION, RESPONSE_TEMPLATE, ContextLevel


@dataclass(frozen=True)
class PromptBuilderConfig:
    """Context level and feature grouping used when rendering prompts.

    Args:
        level: Context level, or its CLI alias.
        grouping: Grouping config or preset name.
    """

    level: ContextLevel = ContextLevel.BP_KNOWLEDGE_USER
    grouping: GroupingConfig = field(default=TABLE1_GROUPING)

    def __post_init__(self) -> None:
        object.__setattr__(self, "level", ContextLevel.parse(self.level))
        if isinstance(self.grouping, str):
            object.__setattr__(self, "grouping", get_grouping(self.grouping))


@dataclass(frozen=True)
class PromptRecord:
    """A rendered prompt, optionally paired with its target response.

    Args:
        instruction: System/task preamble.
        input: Rendered template.
        context_level: Level the input was rendered at.
        subject_id: Subject of the source record.
        visit_day: Visit of the source record.
        response: Target text; present only on tuning records.
    """

    instruction: str
    input: str
    context_level: ContextLevel
    subject_id: str
    visit_day: VisitDay
    response: str | None = None

    def __post_init__(self) -> None:
        if not self.input.endswith(QUESTION):
            raise PromptError(
                f"Prompt for '{self.subject_id}/{self.visit_day.value}' does not end "
                "with the MAP/PP question."
            )

    @property
    def label(self) -> str:
        return f"{self.subject_id}/{self.visit_day.value}"

    def to_tuning_dict(self) -> dict[str, str]:
        """The instruction/input/output triplet of a tuning dataset line."""
        if self.response is None:
            raise PromptError(f"Prompt '{self.label}' has no response to export.")
        return {"instruction": self.instruction, "input": self.input, "output": self.response}

    def to_prompt_dict(self) -> dict[str, Any]:
        return {
            "subject_id": self.subject_id,
            "visit_day": self.visit_day.value,
            "context_level": self.context_level.value,
            "instruction": self.instruction,
            "input": self.input,
        }


def _format_age(age_years: float) -> str:
    return str(int(age_years)) if float(age_years).is_integer() else format_value(age_years)


def render_profile_fields(user: UserProfile) -> dict[str, str]:
    """Profile placeholders: lowercase gender, 1-decimal height and weight."""
    return {
        "age": _format_age(user.age_years),
        "gender": user.gender,
        "height": format_reading(user.height_cm),
        "weight": format_reading(user.weight_kg),
        "hypertension": "yes" if user.hypertension_history else "no",
    }


def render_input(
    grouped: GroupedFeatures,
    level: ContextLevel,
    *,
    all_values: tuple[float, ...] | None = None,
    user: UserProfile | None = None,
    where: str = "record",
) -> str:
    """Substitute formatted features (and the profile) into a level's template.

    Args:
        grouped: Features split by group.
        level: Context level.
        all_values: Features in catalogue order for the basic level. Defaults
            to the grouped values concatenated.
        user: Subject profile, required at the user level.
        where: Record label used in error messages.

    Raises:
        ProfileMissingError: If the level needs a profile and `user` is None.
    """
    if level is ContextLevel.BASIC:
        values = all_values if all_values is not None else grouped.concatenated()
        return level.template.format(all=format_feature_list(values))

    slots: dict[str, str] = {
        "co": format_feature_list(grouped.cardiac_output),
        "pr": format_feature_list(grouped.peripheral_resistance),
        "as_": format_feature_list(grouped.arterial_stiffness),
    }
    if level.needs_profile:
        if user is None:
            raise ProfileMissingError(
                f"Record '{where}' has no user profile for level '{level.cli_name}'.",
                suggestions=["Pass a profiles file or use --context knowledge"],
            )
        slots.update(render_profile_fields(user))
    return level.template.format(**slots)


def build_prompt(
    fv: FeatureVector,
    level: ContextLevel | str = ContextLevel.BP_KNOWLEDGE_USER,
    grouping: GroupingConfig = TABLE1_GROUPING,
) -> PromptRecord:
    """Render `fv` at `level` into an inference prompt (no response).

    Raises:
        ProfileMissingError: At the user level when `fv.user` is None.
    """
    level = ContextLevel.parse(level)
    text = render_input(
        group_features(fv, grouping),
        level,
        all_values=fv.values,
        user=fv.user,
        where=fv.label,
    )
    return PromptRecord(
        instruction=INSTRUCTION,
        input=text,
        context_level=level,
        subject_id=fv.subject_id,
        visit_day=fv.visit_day,
    )


def render_response(map_mmhg: float, pp_mmhg: float) -> str:
    return RESPONSE_TEMPLATE.format(map=format_reading(map_mmhg), pp=format_reading(pp_mmhg))


def build_tuning_record(prompt: PromptRecord, ref_sbp: float, ref_dbp: float) -> PromptRecord:
    """Attach the MAP/PP target computed from the reference reading.

    Raises:
        InvalidReadingError: Unless ref_sbp > ref_dbp > 0.
    """
    try:
        reading = BPReading(float(ref_sbp), float(ref_dbp))
    except InvalidReadingError as e:
        raise InvalidReadingError(f"Tuning record '{prompt.label}': {e}") from e
    return replace(prompt, response=render_response(*map_pp_from_reading(reading)))


def build_tuning_records(
    vectors: list[FeatureVector] | tuple[FeatureVector, ...],
    config: PromptBuilderConfig | None = None,
) -> list[PromptRecord]:
    """Tuning records for every vector, sorted by subject and visit."""
    config = config or PromptBuilderConfig()
    return [
        build_tuning_record(
            build_prompt(fv, config.level, config.grouping), fv.ref_sbp_mmhg, fv.ref_dbp_mmhg
        )
        for fv in sorted(vectors, key=lambda v: v.key)
    ]
