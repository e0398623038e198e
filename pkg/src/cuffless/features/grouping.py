"""Grouping of features by physiological significance."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from ..exceptions import GroupingError
from .vectors import N_FEATURES, FeatureVector


@dataclass(frozen=True)
class GroupingConfig:
    """Assignment of feature numbers 1-31 to the three groups.

    Args:
        name: Preset name.
        arterial_stiffness: Features related to arterial stiffness.
        cardiac_output: Features related to cardiac output.
        peripheral_resistance: Features related to peripheral resistance.

    Raises:
        GroupingError: If the groups are not a partition of 1-31.
    """

    name: str
    arterial_stiffness: frozenset[int]
    cardiac_output: frozenset[int]
    peripheral_resistance: frozenset[int]

    def __post_init__(self) -> None:
        groups = {
            "arterial_stiffness": frozenset(self.arterial_stiffness),
            "cardiac_output": frozenset(self.cardiac_output),
            "peripheral_resistance": frozenset(self.peripheral_resistance),
        }
        for attr, members in groups.items():
            object.__setattr__(self, attr, members)

        universe = frozenset(range(1, N_FEATURES + 1))
        everything = [n for members in groups.values() for n in members]
        outside = sorted(set(everything) - universe)
        if outside:
            raise GroupingError(f"Grouping '{self.name}' has unknown features {outside}.")
        duplicated = sorted({n for n in everything if everything.count(n) > 1})
        if duplicated:
            raise GroupingError(
                f"Grouping '{self.name}' assigns features {duplicated} to several groups."
            )
        missing = sorted(universe - set(everything))
        if missing:
            raise GroupingError(
                f"Grouping '{self.name}' leaves features {missing} unassigned.",
                suggestions=["Every feature 1-31 must belong to exactly one group"],
            )


def _numbers(*spans: Iterable[int]) -> frozenset[int]:
    return frozenset(n for span in spans for n in span)


# 3 / 10 / 18: PTTs; times, LASI, width, rate and intensity rate; slopes,
# areas and intensity differences.
TABLE1_GROUPING = GroupingConfig(
    name="table1",
    arterial_stiffness=_numbers(range(1, 4)),
    cardiac_output=_numbers(range(4, 7), range(16, 19), range(28, 32)),
    peripheral_resistance=_numbers(range(7, 16), range(19, 28)),
)

# 3 / 9 / 19: the pulse intensity rate moves to peripheral resistance.
APPENDIX_B_GROUPING = GroupingConfig(
    name="appendixB",
    arterial_stiffness=_numbers(range(1, 4)),
    cardiac_output=_numbers(range(4, 7), range(16, 19), range(28, 31)),
    peripheral_resistance=_numbers(range(7, 16), range(19, 28), (31,)),
)

GROUPING_PRESETS: dict[str, GroupingConfig] = {
    TABLE1_GROUPING.name: TABLE1_GROUPING,
    APPENDIX_B_GROUPING.name: APPENDIX_B_GROUPING,
}


def get_grouping(name: str) -> GroupingConfig:
    """Return the preset called `name` ("table1" or "appendixB")."""
    try:
        return GROUPING_PRESETS[name]
    except KeyError:
        raise GroupingError(
            f"Unknown grouping preset '{name}'.",
            suggestions=[f"Available presets: {', '.join(GROUPING_PRESETS)}"],
        ) from None


@dataclass(frozen=True)
class GroupedFeatures:
    """Feature values split by group, each in ascending feature number order."""

    arterial_stiffness: tuple[float, ...]
    cardiac_output: tuple[float, ...]
    peripheral_resistance: tuple[float, ...]

    def concatenated(self) -> tuple[float, ...]:
        return self.arterial_stiffness + self.cardiac_output + self.peripheral_resistance


def group_features(
    fv: FeatureVector, grouping: GroupingConfig = TABLE1_GROUPING
) -> GroupedFeatures:
    """Split the features of `fv` into the groups of `grouping`."""

    def pick(members: frozenset[int]) -> tuple[float, ...]:
        return tuple(fv[n] for n in sorted(members))

    return GroupedFeatures(
        arterial_stiffness=pick(grouping.arterial_stiffness),
        cardiac_output=pick(grouping.cardiac_output),
        peripheral_resistance=pick(grouping.peripheral_resistance),
    )
