"""Cross-validation fold plans."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal, Mapping

import numpy as np

from ..exceptions import FoldPlanError
from ..records import VisitDay

SplitUnit = Literal["subject", "record"]


def record_unit(subject_id: str, visit_day: VisitDay | str) -> str:
    """Fold key of a record under record-level splitting."""
    return f"{subject_id}/{VisitDay.parse(visit_day).value}"


@dataclass(frozen=True)
class FoldPlan:
    """Assignment of split units to k folds.

    Args:
        k: Number of folds.
        assignments: Unit (subject id, or "subject/visit") to fold index.
        seed: Shuffle seed.
        unit: "subject" keeps all visits of a subject in one fold.

    Raises:
        FoldPlanError: If an index is outside [0, k) or a fold is empty.
    """

    k: int
    assignments: Mapping[str, int]
    seed: int
    unit: SplitUnit = "subject"

    def __post_init__(self) -> None:
        if self.k < 1:
            raise FoldPlanError(f"k must be >= 1, got {self.k}.")
        object.__setattr__(self, "assignments", dict(sorted(self.assignments.items())))
        outside = sorted(u for u, f in self.assignments.items() if not 0 <= f < self.k)
        if outside:
            raise FoldPlanError(f"Units {outside} have a fold index outside [0, {self.k}).")
        empty = sorted(set(range(self.k)) - set(self.assignments.values()))
        if empty:
            raise FoldPlanError(f"Folds {empty} have no {self.unit}s.")

    def fold_of(self, subject_id: str, visit_day: VisitDay | str) -> int | None:
        """Fold of a record, or None if its unit is not in the plan."""
        unit = subject_id if self.unit == "subject" else record_unit(subject_id, visit_day)
        return self.assignments.get(unit)

    def units_in(self, fold: int) -> list[str]:
        return [u for u, f in self.assignments.items() if f == fold]

    def fold_sizes(self) -> list[int]:
        return [len(self.units_in(fold)) for fold in range(self.k)]


def _assign(units: Iterable[str], k: int, seed: int, unit: SplitUnit) -> FoldPlan:
    distinct = sorted(set(units))
    if k < 1:
        raise FoldPlanError(f"k must be >= 1, got {k}.")
    if k > len(distinct):
        raise FoldPlanError(
            f"Cannot split {len(distinct)} {unit}s into {k} folds.",
            suggestions=[f"Use --folds {max(1, len(distinct))} or fewer"],
        )
    order = np.random.default_rng(seed).permutation(len(distinct))
    assignments = {distinct[i]: position % k for position, i in enumerate(order.tolist())}
    return FoldPlan(k=k, assignments=assignments, seed=seed, unit=unit)


def make_folds(subject_ids: Iterable[str], k: int = 5, seed: int = 0) -> FoldPlan:
    """Shuffle subjects by `seed` and deal them round-robin into k folds.

    Fold sizes differ by at most one.

    Raises:
        FoldPlanError: If k < 1 or k exceeds the number of subjects.
    """
    return _assign(subject_ids, k, seed, "subject")


def make_record_folds(
    records: Iterable[tuple[str, VisitDay | str]], k: int = 5, seed: int = 0
) -> FoldPlan:
    """Record-level folds; visits of one subject may land in different folds."""
    return _assign((record_unit(s, v) for s, v in records), k, seed, "record")
