"""Prompt templates for the three context levels."""

from __future__ import annotations

from enum import Enum

from ..exceptions import PromptError

INSTRUCTION = (
    "You are a personalized healthcare agent trained to predict mean arterial "
    "pressure and pulse pressure based on user information and physiological "
    "features calculated from electrocardiogram and photoplethysmogram signals."
)

QUESTION = "Based on these data, what would be the predicted MAP and PP values?"

BP_KNOWLEDGE = (
    "Mean arterial pressure (MAP) represents the average blood pressure during a "
    "cardiac cycle and is influenced by cardiac output and peripheral resistance. "
    "Pulse pressure (PP) is the difference between systolic and diastolic blood "
    "pressure and is correlated with arterial stiffness."
)

GROUPED_FEATURES = (
    "The physiological features associated with cardiac output are {co}, "
    "peripheral resistance are {pr}, and arterial stiffness are {as_}."
)

USER_PROFILE = (
    "Given the user's profile: age: {age} years old, gender: {gender}, "
    "height: {height} cm, weight: {weight} kg, history of hypertension: {hypertension}."
)

BASIC_TEMPLATE = "The physiological features are {all}. " + QUESTION
KNOWLEDGE_TEMPLATE = f"{BP_KNOWLEDGE} {GROUPED_FEATURES} {QUESTION}"
KNOWLEDGE_USER_TEMPLATE = f"{BP_KNOWLEDGE} {USER_PROFILE} {GROUPED_FEATURES} {QUESTION}"

RESPONSE_TEMPLATE = "Predicted_MAP: {map} mmHg, Predicted_PP: {pp} mmHg."


class ContextLevel(str, Enum):
    """How much context a prompt carries beyond the raw features."""

    BASIC = "basic"
    BP_KNOWLEDGE = "bp_knowledge"
    BP_KNOWLEDGE_USER = "bp_knowledge_user"

    @property
    def template(self) -> str:
        return _TEMPLATES[self]

    @property
    def needs_profile(self) -> bool:
        return self is ContextLevel.BP_KNOWLEDGE_USER

    @property
    def cli_name(self) -> str:
        """Short name used on the command line."""
        return _CLI_NAMES[self]

    @classmethod
    def parse(cls, value: str | ContextLevel) -> ContextLevel:
        """Accept enum values as well as the CLI aliases.

        Raises:
            PromptError: For an unknown level name.
        """
        if isinstance(value, ContextLevel):
            return value
        name = str(value).strip().lower()
        for level, alias in _CLI_NAMES.items():
            if name in (level.value, alias):
                return level
        allowed = ", ".join(_CLI_NAMES.values())
        raise PromptError(f"Unknown context level '{value}'. Expected one of: {allowed}.")


_TEMPLATES = {
    ContextLevel.BASIC: BASIC_TEMPLATE,
    ContextLevel.BP_KNOWLEDGE: KNOWLEDGE_TEMPLATE,
    ContextLevel.BP_KNOWLEDGE_USER: KNOWLEDGE_USER_TEMPLATE,
}

_CLI_NAMES = {
    ContextLevel.BASIC: "basic",
    ContextLevel.BP_KNOWLEDGE: "knowledge",
    ContextLevel.BP_KNOWLEDGE_USER: "knowledge-user",
}
